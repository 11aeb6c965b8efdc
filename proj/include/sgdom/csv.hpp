#ifndef SGDOM_CSV_HPP
#define SGDOM_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sgdom {

/// One exported point. kind distinguishes cloud samples, eigenvalue
/// markers and principal-region outline vertices; branch records the
/// conjugate branch the point came from.
struct CsvRow {
    double omega = 0.0;
    double tau = 1.0;
    double re = 0.0;
    double im = 0.0;
    std::string branch;
    std::string kind;
};

/// Shortest representation that parses back to exactly the same double,
/// capped at 17 significant digits.
std::string format_double(double v);

/// Writes the header line omega,tau,re,im,branch,kind and one line per
/// row.
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

/// Parses what write_csv produced. Throws std::runtime_error with the
/// line number on malformed input.
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace sgdom

#endif  // SGDOM_CSV_HPP
