#ifndef DOMAINSCOPE_ERRORS_HPP
#define DOMAINSCOPE_ERRORS_HPP

#include <stdexcept>

namespace domainscope {

/// A file could not be opened, read, or written. Kept distinct from
/// validation failures so callers can report I/O separately.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace domainscope

#endif  // DOMAINSCOPE_ERRORS_HPP
