#pragma once

#include <stdexcept>
#include <string>

namespace cebench {

/// Error taxonomy used across the harness. The CLI maps these onto
/// process exit codes, so additions here should stay coarse-grained.
enum class errc {
    config,          // bad or inconsistent configuration / empty grid
    io,              // filesystem problem
    invalid_input,   // bad value passed to an operation (zero-length profile, ...)
    out_of_range,    // slice longer than its source
    key_contract,    // key supplied where forbidden, missing where required
    integrity,       // decompression failure / corrupted container
    authentication,  // MAC or AEAD tag mismatch
    corruption,      // round-trip mismatch; fatal for a run
    incomplete_grid, // analysis input missing a required order/pair
    resume_mismatch, // resume attempted against a different configuration
    schema,          // unparseable or wrong-version file format
    empty_input,     // aggregate over nothing
};

const char* to_string(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace cebench
