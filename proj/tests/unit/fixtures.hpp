#ifndef CBR_TEST_FIXTURES_HPP
#define CBR_TEST_FIXTURES_HPP

#include <string>

#include "cbr/io.hpp"

inline cbr::ExactMatrix load_fixture(const std::string& name) {
    return cbr::load_matrix(std::string(CBR_DATA_DIR) + "/fixtures/" + name);
}
inline cbr::ExactMatrix load_right_fixture(const std::string& name) { return cbr::as_right_factor(load_fixture(name)); }

#endif
