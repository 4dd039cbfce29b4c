#pragma once

namespace exactwkb::cli {

// Exit status: 0 success, 2 invalid input, 3 solver did not converge (or a check failed).
int run(int argc, char** argv);

}  // namespace exactwkb::cli
