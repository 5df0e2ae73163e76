#pragma once

#include <iosfwd>

namespace ergocert::app {

enum ExitCode : int { kOk = 0, kError = 1, kExhausted = 2, kTableDeviation = 3 };

/// `ergocert drift|certify|tables [options]`
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergocert::app
