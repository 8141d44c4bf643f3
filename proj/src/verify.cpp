#include "mukstab/verify.hpp"

namespace mukstab {

// suites are filled in verify.cpp (in progress)

}  // namespace mukstab
