#pragma once

#include <iosfwd>

namespace fstspmd {

// Exit status: 0 success, 1 solve/validation failure, 2 usage error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fstspmd
