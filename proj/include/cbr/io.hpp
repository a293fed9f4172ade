#ifndef CBR_IO_HPP
#define CBR_IO_HPP

#include <stdexcept>
#include <string>

#include "cbr/matrix.hpp"
#include "json.hpp"

namespace cbr {

using json = nlohmann::ordered_json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {rows, cols, d, vars?, discriminant?, entries: [row-major strings]}
ExactMatrix matrix_from_json(const json& j, const std::string& source = "<json>");
json matrix_to_json(const ExactMatrix& m);
json load_json(const std::string& path);
ExactMatrix load_matrix(const std::string& path);

// A right factor may be written n x k or as its k x n transpose; the wider
// layout is read as the transpose.
ExactMatrix as_right_factor(const ExactMatrix& m);

std::string rational_str(const Rational& q);
json exponent_json(const Exponent& e);
json subset_json(Mask m);
Mask subset_from_json(const json& j);

}  // namespace cbr

#endif
