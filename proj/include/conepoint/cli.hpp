#pragma once

namespace conepoint::cli {

// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitTargetMiss = 5;

int run(int argc, char** argv);

}  // namespace conepoint::cli
