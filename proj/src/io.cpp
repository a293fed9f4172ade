#include "cbr/io.hpp"

#include <fstream>
#include <sstream>

namespace cbr {

ExactMatrix matrix_from_json(const json& j, const std::string& source) {
    try {
        int rows = j.at("rows").get<int>();
        int cols = j.at("cols").get<int>();
        int d = j.value("d", 1);
        std::vector<std::string> names = j.contains("vars") ? j.at("vars").get<std::vector<std::string>>() : default_names(d);
        if (static_cast<int>(names.size()) != d) throw InputError(source + ": 'vars' length differs from d");
        DiscPtr disc;
        if (j.contains("discriminant") && !j.at("discriminant").is_null()) {
            LaurentPoly D = parse_laurent(j.at("discriminant").get<std::string>(), names);
            disc = std::make_shared<const LaurentPoly>(D);
        }
        const json& entries = j.at("entries");
        if (!entries.is_array() || static_cast<int>(entries.size()) != rows * cols)
            throw InputError(source + ": expected " + std::to_string(rows * cols) + " entries");
        ExactMatrix m(rows, cols, d);
        m.names = names;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const json& e = entries.at(static_cast<std::size_t>(r * cols + c));
                std::string text = e.is_string() ? e.get<std::string>() : e.dump();
                try {
                    m(r, c) = parse_scalar(text, names, disc);
                } catch (const std::exception& ex) {
                    throw InputError(source + ": entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                                     "): " + ex.what());
                }
            }
        return m;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& ex) {
        throw InputError(source + ": " + ex.what());
    }
}

json matrix_to_json(const ExactMatrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["d"] = m.nvars();
    j["vars"] = m.names;
    if (DiscPtr disc = m.disc()) j["discriminant"] = disc->to_string(m.names);
    json e = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) e.push_back(m(r, c).to_string(m.names));
    j["entries"] = e;
    return j;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& ex) {
        throw InputError(path + ": " + ex.what());
    }
}

ExactMatrix load_matrix(const std::string& path) { return matrix_from_json(load_json(path), path); }

ExactMatrix as_right_factor(const ExactMatrix& m) { return m.rows() < m.cols() ? m.transpose() : m; }

std::string rational_str(const Rational& q) { return q.get_str(); }

json exponent_json(const Exponent& e) {
    json a = json::array();
    for (int x : e) a.push_back(x);
    return a;
}

json subset_json(Mask m) {
    json a = json::array();
    for (int x : elements(m)) a.push_back(x);
    return a;
}

Mask subset_from_json(const json& j) { return mask_of(j.get<std::vector<int>>()); }

}  // namespace cbr
