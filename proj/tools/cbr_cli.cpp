#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cbr/report.hpp"

using namespace cbr;

namespace {

struct Pair {
    ExactMatrix L, R;
};
Pair load_pair(const std::string& left, const std::string& right) {
    ExactMatrix L = load_matrix(left);
    ExactMatrix R = as_right_factor(load_matrix(right));
    return {L, R};
}

std::vector<Mask> parse_bases(const std::vector<std::string>& specs) {
    std::vector<Mask> out;
    for (const auto& s : specs) {
        std::vector<int> e;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                e.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw InputError("bad basis '" + s + "'");
            }
        }
        out.push_back(mask_of(e));
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cauchy-Binet reduction toolkit"};
    app.require_subcommand(1);
    std::string output;
    unsigned seed = 1;
    bool timings = false;
    app.add_option("-o,--output", output, "write the report here instead of stdout");
    app.add_option("--seed", seed, "seed for randomised choices");
    app.add_flag("--timings", timings, "add wall-clock timings to the report");

    std::string left, right;
    auto add_pair = [&](CLI::App* c) {
        c->add_option("--left", left, "left factor (k x n) JSON")->required();
        c->add_option("--right", right, "right factor (n x k, or its k x n transpose) JSON")->required();
    };

    auto* expand = app.add_subcommand("expand", "Cauchy-Binet terms of det(L R)");
    add_pair(expand);

    bool scan = false;
    std::size_t limit = 20;
    auto* curv = app.add_subcommand("curvature", "monomial condition and curvature");
    add_pair(curv);
    curv->add_flag("--scan", scan, "scan every quadruple instead of stopping at the first nonzero one");
    curv->add_option("--limit", limit, "number of witnesses listed");

    std::vector<std::string> bases;
    std::string chi, vars = "t";
    std::size_t records = 200;
    auto* cls = app.add_subcommand("classify-y", "A/B terms, square parts and types per context");
    cls->add_option("--left", left, "left factor JSON");
    cls->add_option("--right", right, "right factor JSON");
    cls->add_option("--basis", bases, "restrict to these bases, e.g. 1,2");
    cls->add_option("--limit", records, "number of records listed");
    cls->add_option("--chi", chi, "a single triple 'x;y;z' of Laurent polynomials");
    cls->add_option("--vars", vars, "comma-separated variable names for --chi");

    auto* red = app.add_subcommand("check-reduction", "hypotheses, potential and offset");
    add_pair(red);

    std::string perm, answer_file;
    bool shortcut = false, random_perm = false;
    auto* sim = app.add_subcommand("simulate-protocol", "unlabelled-query protocol on a constant pair");
    sim->add_option("--left", left, "a (k x n) JSON");
    sim->add_option("--right", right, "q (n x k) JSON");
    sim->add_option("--perm", perm, "JSON array: image of each element 1..n");
    sim->add_flag("--random-perm", random_perm, "plant a random permutation drawn from --seed");
    sim->add_flag("--shortcut", shortcut, "also run the two-scalar integer variant");
    sim->add_option("--answer-file", answer_file, "decode an external answer {k, t0, values, values_at_one}");

    std::string example;
    auto* demo = app.add_subcommand("demo", "worked examples from committed fixtures");
    demo->add_option("--example", example, "1.2, 4.1, 5.3 or 5.9")->required();
    std::string data_dir = CBR_DATA_DIR;
    demo->add_option("--data", data_dir, "data directory holding fixtures/");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    auto start = std::chrono::steady_clock::now();
    Report rep;
    try {
        if (*expand) {
            Pair p = load_pair(left, right);
            rep = expand_report(p.L, p.R);
        } else if (*curv) {
            Pair p = load_pair(left, right);
            rep = curvature_report(p.L, p.R, scan, limit);
        } else if (*cls) {
            if (!chi.empty()) {
                auto parts = split(chi, ';');
                if (parts.size() != 3) throw InputError("--chi needs three ';'-separated terms");
                rep = classify_triple_report({parts[0], parts[1], parts[2]}, split(vars, ','));
            } else {
                if (left.empty() || right.empty()) throw InputError("classify-y needs --left and --right, or --chi");
                Pair p = load_pair(left, right);
                rep = classify_report(p.L, p.R, parse_bases(bases), records);
            }
        } else if (*red) {
            Pair p = load_pair(left, right);
            rep = reduction_report(p.L, p.R);
        } else if (*sim) {
            if (!answer_file.empty()) {
                rep = answer_file_report(load_json(answer_file), answer_file);
            } else {
                if (left.empty() || right.empty()) throw InputError("simulate-protocol needs --left and --right");
                Pair p = load_pair(left, right);
                const ExactMatrix& a = p.L;
                const ExactMatrix& q = p.R;
                ProtocolOptions opt;
                opt.shortcut = shortcut;
                if (!perm.empty()) {
                    try {
                        opt.psi = load_json(perm).get<std::vector<int>>();
                    } catch (const json::exception& e) {
                        throw InputError(perm + ": " + e.what());
                    }
                } else if (random_perm) {
                    std::vector<int> p(static_cast<std::size_t>(a.cols()));
                    std::iota(p.begin(), p.end(), 1);
                    std::mt19937 rng(seed);
                    std::shuffle(p.begin(), p.end(), rng);
                    opt.psi = p;
                }
                rep = protocol_report(a, q, opt);
            }
        } else if (*demo) {
            rep = demo_report(example, data_dir);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const MatroidError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    if (timings) {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rep.doc["timings_ms"] = ms;
    }
    std::string text = rep.doc.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "input error: cannot write '" << output << "'\n";
            return kInputError;
        }
        out << text;
    }
    return rep.exit_code;
}
