#pragma once

#include <stdexcept>
#include <string>

namespace recmeth {

// Exit codes used by the CLI: 2, 3, 4.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace recmeth
