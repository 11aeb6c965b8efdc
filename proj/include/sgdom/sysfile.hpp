#ifndef SGDOM_SYSFILE_HPP
#define SGDOM_SYSFILE_HPP

#include "sgdom/lti.hpp"

#include <stdexcept>
#include <string>

namespace sgdom {

/// Raised for malformed system files; the message names the file and
/// the offending field or parse location.
class sysfile_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A system description loaded from disk: a named transfer matrix given
/// either as an m x m grid of rational entries (coefficients ascending
/// by power) or as a real state-space quadruple.
struct SystemFile {
    std::string name;
    std::string kind;
    TransferMatrix system;
};

/// Parses a JSON system description. origin labels error messages,
/// usually with the file path.
SystemFile parse_system(const std::string& text, const std::string& origin);

/// Reads and parses the file at path.
SystemFile load_system(const std::string& path);

}  // namespace sgdom

#endif  // SGDOM_SYSFILE_HPP
