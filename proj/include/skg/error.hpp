#ifndef SKG_ERROR_HPP
#define SKG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace skg {

enum class Errc {
    malformed_header,
    unsupported_magic,
    truncated,
    dimension_mismatch,
    background_pixel,
    not_thinned,
    unsmoothed_input,
    parity_violation,
    sharp_turn,
    bad_magic,
    version_unsupported,
    count_mismatch,
    corrupt_token,
    out_of_bounds,
    too_large,
    invalid_argument,
};

// Library-wide exception. The code is stable and meant for programmatic
// handling; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace skg

#endif
