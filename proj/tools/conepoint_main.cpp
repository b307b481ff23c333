#include "conepoint/cli.hpp"

int main(int argc, char** argv) { return conepoint::cli::run(argc, argv); }
