#pragma once

#include <stdexcept>
#include <string>

namespace dagbft {

// Bad scenario, trace, or command-line input.
struct config_error: std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A function was called outside its precondition, e.g. applying a disabled event.
struct contract_violation: std::logic_error {
    using std::logic_error::logic_error;
};

// An address was looked up in a committee it does not belong to.
struct membership_error: std::out_of_range {
    using std::out_of_range::out_of_range;
};

} // namespace dagbft
