#ifndef CBR_REPORT_HPP
#define CBR_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "cbr/io.hpp"
#include "cbr/protocol.hpp"
#include "cbr/reduce.hpp"

namespace cbr {

// Exit codes shared by every command.
enum ExitCode : int { kSuccess = 0, kNotReduced = 2, kHypothesisFailed = 3, kInputError = 4 };

struct Report {
    json doc;
    int exit_code = kSuccess;
};

Report expand_report(const ExactMatrix& L, const ExactMatrix& R);
// First nonzero curvature (or every one with `scan`, at most `limit` listed).
Report curvature_report(const ExactMatrix& L, const ExactMatrix& R, bool scan, std::size_t limit);
// Per-context A, B, Q, D, type and roots; `bases` empty = every k-subset.
Report classify_report(const ExactMatrix& L, const ExactMatrix& R, const std::vector<Mask>& bases, std::size_t limit);
// A single chi triple given as Laurent strings.
Report classify_triple_report(const std::array<std::string, 3>& chi, const std::vector<std::string>& vars);
Report reduction_report(const ExactMatrix& L, const ExactMatrix& R);

struct ProtocolOptions {
    std::optional<std::vector<int>> psi;  // identity when absent
    bool shortcut = false;
};
Report protocol_report(const ExactMatrix& a, const ExactMatrix& q, const ProtocolOptions& opt);
// {k, t0: [...], values: [...], values_at_one: [...]} produced elsewhere.
Report answer_file_report(const json& answer, const std::string& source);

// "1.2", "4.1", "5.3", "5.9"; fixtures are read from `data_dir`/fixtures.
Report demo_report(const std::string& example, const std::string& data_dir);

json reduction_json(const ReductionResult& r);
std::string scalar_str(const QuadExtScalar& v, const std::vector<std::string>& names);

}  // namespace cbr

#endif
