#include "cbr/report.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cbr {

namespace {

std::vector<std::string> names_of(const ExactMatrix& m) {
    return m.names.empty() ? default_names(m.nvars()) : m.names;
}

json witness_json(const CurvatureWitness& w) {
    json j;
    j["H"] = subset_json(w.H);
    j["a1"] = w.a1;
    j["a2"] = w.a2;
    j["b1"] = w.b1;
    j["b2"] = w.b2;
    j["value"] = exponent_json(w.value);
    return j;
}

json assumptions_json(const AssumptionReport& a) {
    json j;
    j["r_generic"] = a.r_generic;
    j["r_zero_minor"] = a.r_zero_minor ? subset_json(*a.r_zero_minor) : json();
    j["generic_columns"] = a.generic_columns;
    if (a.columns) {
        json c;
        c["basis"] = subset_json(a.columns->basis);
        c["alpha1"] = a.columns->alpha1;
        c["alpha2"] = a.columns->alpha2;
        j["generic_columns_witness"] = c;
    } else {
        j["generic_columns_witness"] = json();
    }
    j["dimension_bound"] = a.dimension_bound;
    if (!a.evaluation_error.empty()) j["evaluation_error"] = a.evaluation_error;
    return j;
}

int verdict_code(Verdict v) {
    switch (v) {
        case Verdict::Reduced: return kSuccess;
        case Verdict::NotReduced: return kNotReduced;
        case Verdict::HypothesisFailed: return kHypothesisFailed;
    }
    return kNotReduced;
}

json rational_json(const Rational& q) { return rational_str(q); }

json labeled_json(const LabeledValues& g) {
    json a = json::array();
    for (const auto& [I, v] : g) a.push_back(json{{"set", subset_json(I)}, {"g", rational_str(v)}});
    return a;
}

json psi_json(const std::vector<int>& psi) {
    json a = json::array();
    for (int x : psi) a.push_back(x);
    return a;
}

Rational constant_value_of(const QuadExtScalar& v) {
    if (!v.in_base_field() || !v.rat().is_constant()) throw InputError("protocol inputs must be rational constants");
    return v.rat().num().constant_value() / v.rat().den().constant_value();
}

json recovery_json(const MatrixRecovery& m, const std::optional<std::vector<int>>& psi, const LabeledValues* original) {
    json j;
    j["ok"] = m.ok;
    if (!m.ok) {
        j["stage"] = m.stage;
        j["error"] = m.error;
        j["hypothesis_failed"] = m.hypothesis_failed;
        if (m.plucker_witness) {
            json w;
            w["H"] = subset_json(m.plucker_witness->first);
            w["indices"] = m.plucker_witness->second;
            j["plucker_witness"] = w;
        }
        return j;
    }
    j["basis"] = subset_json(m.columns->basis);
    j["alpha1"] = m.columns->alpha1;
    j["pivot"] = m.pivot;
    j["seed"] = m.seed_used;
    j["q_generic"] = m.q_generic;
    j["a"] = matrix_to_json(m.pair->a);
    j["q"] = matrix_to_json(m.pair->q);
    if (original && psi)
        j["reproduces_g"] = product_terms(permute_columns(m.pair->a, *psi), permute_rows(m.pair->q, *psi)) == *original;
    else
        j["reproduces_g"] = product_terms(m.pair->a, m.pair->q) == m.pair->gmap;
    return j;
}

int recovery_code(const MatrixRecovery& m) {
    if (m.ok) return kSuccess;
    return m.hypothesis_failed ? kHypothesisFailed : kNotReduced;
}

}  // namespace

std::string scalar_str(const QuadExtScalar& v, const std::vector<std::string>& names) { return v.to_string(names); }

Report expand_report(const ExactMatrix& L, const ExactMatrix& R) {
    TermMap h = cauchy_binet_terms(L, R);
    auto names = names_of(L);
    Report r;
    json& j = r.doc;
    j["command"] = "expand";
    j["n"] = h.n;
    j["k"] = h.k;
    j["vars"] = names;
    json terms = json::array();
    long zeros = 0;
    for (Mask I : k_subsets(h.n, h.k)) {
        const QuadExtScalar& v = h.at(I);
        if (v.is_zero()) {
            ++zeros;
            continue;
        }
        terms.push_back(json{{"basis", subset_json(I)}, {"value", scalar_str(v, names)}});
    }
    j["nonzero_terms"] = terms.size();
    j["zero_terms"] = zeros;
    j["terms"] = terms;
    j["sum"] = scalar_str(term_sum(h), names);
    return r;
}

Report curvature_report(const ExactMatrix& L, const ExactMatrix& R, bool scan, std::size_t limit) {
    TermMap h = cauchy_binet_terms(L, R);
    auto names = names_of(L);
    Report r;
    json& j = r.doc;
    j["command"] = "curvature";
    j["n"] = h.n;
    j["k"] = h.k;
    auto mc = monomial_condition(h);
    if (auto* w = std::get_if<NonMonomialWitness>(&mc)) {
        j["monomial"] = false;
        j["witness"] = json{{"basis", subset_json(w->basis)}, {"value", scalar_str(w->value, names)}};
        r.exit_code = kNotReduced;
        return r;
    }
    const auto& m = std::get<MonomialAssignment>(mc);
    j["monomial"] = true;
    CurvatureScan s = curvature_scan(m, !scan);
    j["scan"] = scan ? "full" : "first";
    j["evaluable"] = s.evaluable;
    j["not_evaluable"] = s.not_evaluable;
    j["nonzero"] = s.nonzero.size();
    json ws = json::array();
    for (std::size_t u = 0; u < s.nonzero.size() && u < limit; ++u) ws.push_back(witness_json(s.nonzero[u]));
    j["witnesses"] = ws;
    r.exit_code = s.nonzero.empty() ? kSuccess : kNotReduced;
    return r;
}

namespace {

json ab_json(const ABData& ab, const YRoots& roots, const std::vector<std::string>& names) {
    json j;
    json chi = json::array();
    for (const auto& v : ab.chi.values) chi.push_back(scalar_str(v, names));
    j["chi"] = chi;
    j["type"] = ytype_str(ab.type);
    j["A"] = scalar_str(ab.A, names);
    j["B"] = scalar_str(ab.B, names);
    if (ab.type != YType::Unsupported && ab.type != YType::Unobservable) {
        j["Q"] = ab.Q.to_string(names);
        j["D"] = ab.D.to_string(names);
        j["unit"] = ab.unit.to_string(names);
        j["omega"] = ab.omega;
    }
    j["lambda"] = ab.lambda ? json(*ab.lambda) : json();
    json rs = json::array();
    for (const auto& y : roots.roots) rs.push_back(scalar_str(y, names));
    j["roots"] = rs;
    if (!roots.note.empty()) j["note"] = roots.note;
    return j;
}

json reconstruction_json(const Reconstruction& rec, const std::vector<std::string>& names) {
    json j;
    j["kernel"] = rec.kernel.to_string(names);
    j["omega"] = rec.omega;
    json cs = json::array();
    for (const auto& c : rec.candidates) {
        json x;
        json t = json::array();
        for (const auto& p : normalize_triple(c.chi)) t.push_back(p.to_string(names));
        x["chi"] = t;
        x["class"] = c.kind;
        if (c.rho) x["rho"] = rational_str(*c.rho);
        if (c.kind == "S") {
            x["table_sign"] = c.table_sign;
            x["table_p"] = c.table_p;
        }
        cs.push_back(x);
    }
    j["configurations"] = cs;
    j["notes"] = rec.notes;
    return j;
}

}  // namespace

Report classify_report(const ExactMatrix& L, const ExactMatrix& R, const std::vector<Mask>& bases, std::size_t limit) {
    TermMap h = cauchy_binet_terms(L, R);
    auto names = names_of(L);
    DiscPtr hint = R.disc() ? R.disc() : L.disc();
    Report r;
    json& j = r.doc;
    j["command"] = "classify-y";
    j["n"] = h.n;
    j["k"] = h.k;
    std::vector<Mask> use = bases.empty() ? k_subsets(h.n, h.k) : bases;
    std::map<std::string, long> counts;
    long unobservable = 0, listed = 0;
    json recs = json::array();
    for (Mask I : use) {
        if (card(I) != h.k) throw InputError("basis " + subset_str(I) + " does not have k elements");
        std::vector<int> in = elements(I), out;
        for (int a = 1; a <= h.n; ++a)
            if (!has(I, a)) out.push_back(a);
        for (std::size_t x = 0; x < in.size(); ++x)
            for (std::size_t y = x + 1; y < in.size(); ++y)
                for (std::size_t p = 0; p < out.size(); ++p)
                    for (std::size_t q = p + 1; q < out.size(); ++q) {
                        ChiTriple chi = chi_triple(h, I, in[x], in[y], out[p], out[q]);
                        if (!chi.observable) {
                            ++unobservable;
                            continue;
                        }
                        ABData ab = ab_terms(chi);
                        ++counts[ytype_str(ab.type)];
                        if (static_cast<std::size_t>(listed) >= limit) continue;
                        ++listed;
                        json rec = ab_json(ab, y_roots(chi, hint), names);
                        json ctx;
                        ctx["basis"] = subset_json(I);
                        ctx["i"] = in[x];
                        ctx["j"] = in[y];
                        ctx["alpha"] = out[p];
                        ctx["beta"] = out[q];
                        rec["context"] = ctx;
                        recs.push_back(rec);
                    }
    }
    json c;
    for (const auto& [t, v] : counts) c[t] = v;
    j["counts"] = c;
    j["unobservable"] = unobservable;
    j["listed"] = listed;
    j["records"] = recs;
    return r;
}

Report classify_triple_report(const std::array<std::string, 3>& chi, const std::vector<std::string>& vars) {
    std::array<LaurentPoly, 3> t;
    for (int u = 0; u < 3; ++u) t[static_cast<std::size_t>(u)] = parse_laurent(chi[static_cast<std::size_t>(u)], vars);
    ChiTriple c;
    c.observable = true;
    for (int u = 0; u < 3; ++u) c.values[static_cast<std::size_t>(u)] = QuadExtScalar(RationalFunction(t[static_cast<std::size_t>(u)]));
    Report r;
    r.doc["command"] = "classify-y";
    r.doc["vars"] = vars;
    ABData ab = ab_terms(c);
    r.doc["triple"] = ab_json(ab, y_roots(c), vars);
    if (auto K = discriminant_kernel(t); K && !K->is_constant())
        r.doc["reconstruction"] = reconstruction_json(reconstruct_from_kernel(*K), vars);
    return r;
}

json reduction_json(const ReductionResult& res) {
    json j;
    j["verdict"] = verdict_str(res.verdict);
    j["reason"] = res.reason;
    j["assumptions"] = assumptions_json(res.assumptions);
    if (res.verdict == Verdict::Reduced) {
        json psi = json::array();
        for (const auto& e : res.psi) psi.push_back(exponent_json(e));
        j["psi"] = psi;
        j["m0"] = exponent_json(res.m0);
        j["basis"] = subset_json(res.basis);
        j["alpha1"] = res.alpha1;
    }
    if (res.non_monomial) j["non_monomial"] = json{{"basis", subset_json(res.non_monomial->basis)}};
    if (res.curvature) j["curvature_witness"] = witness_json(*res.curvature);
    if (res.verify_failure) j["verify_failure"] = subset_json(*res.verify_failure);
    return j;
}

Report reduction_report(const ExactMatrix& L, const ExactMatrix& R) {
    ReductionResult res = check_reduction(L, R);
    Report r;
    r.doc["command"] = "check-reduction";
    r.doc["n"] = L.cols();
    r.doc["k"] = L.rows();
    r.doc["result"] = reduction_json(res);
    r.exit_code = verdict_code(res.verdict);
    return r;
}

Report protocol_report(const ExactMatrix& a, const ExactMatrix& q, const ProtocolOptions& opt) {
    const int k = a.rows(), n = a.cols();
    if (q.rows() != n || q.cols() != k) throw InputError("right factor shape does not match the left factor");
    for (const auto* m : {&a, &q})
        for (int r0 = 0; r0 < m->rows(); ++r0)
            for (int c0 = 0; c0 < m->cols(); ++c0) (void)constant_value_of((*m)(r0, c0));
    LabeledValues g = product_terms(a, q);
    if (g.empty()) throw InputError("every Cauchy-Binet term vanishes");
    std::vector<int> psi0 = opt.psi.value_or(std::vector<int>());
    if (psi0.empty())
        for (int x = 1; x <= n; ++x) psi0.push_back(x);
    {
        std::vector<int> s = psi0;
        std::sort(s.begin(), s.end());
        for (int x = 1; x <= n; ++x)
            if (static_cast<int>(s.size()) != n || s[static_cast<std::size_t>(x - 1)] != x)
                throw InputError("permutation must list each of 1..n once");
    }
    Matroid M = support_matroid(n, k, g);
    BasisPermutation P = induced_permutation(psi0, M);
    for (const auto& [I, J] : P)
        if (!M.contains(J)) throw InputError("the basis family is not closed under the permutation");

    Report r;
    json& j = r.doc;
    j["command"] = "simulate-protocol";
    j["n"] = n;
    j["k"] = k;
    j["bases"] = g.size();
    j["planted_psi"] = psi_json(psi0);

    QueryPoint one;
    one.t.assign(static_cast<std::size_t>(n), Rational(1));
    Bounds b = bounds_query(oracle_answer(g, P, one));
    QueryPoint t0 = build_query(b, n, k, g.size());
    json query;
    query["lambda"] = rational_json(b.lambda);
    query["mu"] = rational_json(b.mu);
    json ts = json::array();
    for (const auto& t : t0.t) ts.push_back(rational_str(t));
    query["t0"] = ts;
    query["separation"] = satisfies_separation(t0, b, k, g.size());
    j["query"] = query;

    UnlabeledAnswer ans = oracle_answer(g, P, t0);
    RecoveredPermutation rec = recover_chain(ans, t0, b, n, k, &g);
    json chain;
    chain["ok"] = rec.ok;
    json cs = json::array();
    for (Mask A : rec.chain) cs.push_back(subset_json(A));
    chain["exponent_chain"] = cs;
    json ls = json::array();
    for (Mask A : rec.label_chain) ls.push_back(subset_json(A));
    chain["label_chain"] = ls;
    if (rec.psi) chain["psi"] = psi_json(*rec.psi);
    if (!rec.ok) {
        chain["stage"] = rec.stage;
        chain["error"] = rec.error;
    }
    j["chain"] = chain;
    std::optional<MatrixRecovery> full;
    LabeledValues gmap;
    if (rec.ok) {
        LabelResult lr = verify_and_label(ans, *rec.psi, t0, g);
        j["sum_check"] = lr.ok;
        if (lr.ok) {
            gmap = lr.gmap;
            full = recover_matrices(gmap, n, k);
            j["recovery"] = recovery_json(*full, rec.psi, &g);
        }
    }
    if (!rec.ok || !j.value("sum_check", false)) {
        j["verdict"] = "rejected";
        r.exit_code = kNotReduced;
    } else {
        j["verdict"] = full->ok ? "recovered" : "no-decomposition";
        j["psi_matches"] = *rec.psi == psi0;
        r.exit_code = recovery_code(*full);
    }

    if (opt.shortcut) {
        json s;
        bool integral = std::all_of(g.begin(), g.end(), [](const auto& kv) { return kv.second.get_den() == 1; });
        if (!integral) {
            s["ok"] = false;
            s["error"] = "terms are not integers";
        } else {
            mpz_class maxG = 0;
            for (const auto& [I, v] : g) maxG = std::max(maxG, mpz_class(abs(v.get_num())));
            mpz_class delta = shortcut_delta(g, P, n, k);
            ShortcutResult sr = integer_shortcut(maxG, delta, n, k, g.size(), &g);
            s["maxG"] = maxG.get_str();
            s["base"] = sr.query.base.get_str();
            s["block"] = sr.query.block;
            s["delta_digits"] = delta.get_str().size();
            s["ok"] = sr.ok;
            if (!sr.ok) {
                s["stage"] = sr.stage;
                s["error"] = sr.error;
            } else {
                s["psi"] = psi_json(*sr.psi);
                s["same_as_full"] = full && full->ok && sr.recovery->pair->a == full->pair->a &&
                                    sr.recovery->pair->q == full->pair->q;
            }
        }
        j["shortcut"] = s;
    }
    return r;
}

Report answer_file_report(const json& doc, const std::string& source) {
    UnlabeledAnswer ans, at_one;
    QueryPoint t0;
    int k = 0;
    try {
        k = doc.at("k").get<int>();
        for (const auto& v : doc.at("t0")) t0.t.emplace_back(v.get<std::string>());
        for (const auto& v : doc.at("values")) ans.values.emplace_back(v.get<std::string>());
        for (const auto& v : doc.at("values_at_one")) at_one.values.emplace_back(v.get<std::string>());
    } catch (const std::exception& e) {
        throw InputError(source + ": " + e.what());
    }
    for (auto* v : {&t0.t, &ans.values, &at_one.values})
        for (auto& x : *v) x.canonicalize();
    std::sort(ans.values.begin(), ans.values.end());
    const int n = static_cast<int>(t0.t.size());
    if (k < 1 || k > n) throw InputError(source + ": k out of range");
    Report r;
    json& j = r.doc;
    j["command"] = "simulate-protocol";
    j["mode"] = "answer-file";
    j["n"] = n;
    j["k"] = k;
    Bounds b;
    try {
        b = bounds_query(at_one);
    } catch (const std::domain_error& e) {
        throw InputError(source + ": " + e.what());
    }
    j["separation"] = satisfies_separation(t0, b, k, ans.values.size());
    RecoveredPermutation rec = recover_chain(ans, t0, b, n, k);
    j["decode_ok"] = rec.ok;
    if (!rec.ok) {
        j["stage"] = rec.stage;
        j["error"] = rec.error;
        j["verdict"] = "rejected";
        r.exit_code = kNotReduced;
        return r;
    }
    LabeledValues gmap = label_map(rec.decoded);
    j["labels"] = labeled_json(gmap);
    MatrixRecovery m = recover_matrices(gmap, n, k);
    j["recovery"] = recovery_json(m, std::nullopt, nullptr);
    j["verdict"] = m.ok ? "recovered" : "no-decomposition";
    r.exit_code = recovery_code(m);
    return r;
}

// ------------------------------------------------------------ demos

namespace {

ExactMatrix fixture(const std::string& dir, const std::string& name) { return load_matrix(dir + "/fixtures/" + name); }

Report demo_12(const std::string& dir) {
    ExactMatrix L = fixture(dir, "ex12_left.json"), R = as_right_factor(fixture(dir, "ex12_right.json"));
    TermMap h = cauchy_binet_terms(L, R);
    Report r;
    json& j = r.doc;
    j["command"] = "demo";
    j["example"] = "1.2";
    long nonzero = 0, monomial = 0, low_degree = 0;
    for (const auto& v : h.values) {
        if (v.is_zero()) continue;
        ++nonzero;
        auto m = as_monomial(v);
        if (!m) continue;
        ++monomial;
        if (m->exp[0] == 0 || m->exp[0] == 1) ++low_degree;
    }
    j["subsets"] = h.values.size();
    j["nonzero_terms"] = nonzero;
    j["monomial_terms"] = monomial;
    j["degree_0_or_1"] = low_degree;
    auto mc = monomial_condition(h);
    const auto& m = std::get<MonomialAssignment>(mc);
    auto c = curvature(m, mask_of({1, 2, 3, 4}), 5, 6, 11, 12);
    j["cited_curvature"] = c ? exponent_json(*c) : json();
    ReductionResult res = check_reduction(L, R);
    j["result"] = reduction_json(res);
    r.exit_code = verdict_code(res.verdict);
    return r;
}

Report demo_41(const std::string& dir) {
    ExactMatrix L = fixture(dir, "ex41_left.json"), R = as_right_factor(fixture(dir, "ex41_right.json"));
    Report r;
    r.doc["command"] = "demo";
    r.doc["example"] = "4.1";
    r.doc["n"] = L.cols();
    r.doc["k"] = L.rows();
    ReductionResult res = check_reduction(L, R);
    r.doc["result"] = reduction_json(res);
    r.exit_code = verdict_code(res.verdict);
    return r;
}

Report demo_53(const std::string& dir) {
    json data = load_json(dir + "/fixtures/ex53_triples.json");
    Report r;
    r.doc["command"] = "demo";
    r.doc["example"] = "5.3";
    json groups = json::array();
    for (const auto& g : data.at("groups")) {
        auto vars = g.at("vars").get<std::vector<std::string>>();
        json out;
        out["vars"] = vars;
        if (g.contains("B")) {
            LaurentPoly B = parse_laurent(g.at("B").get<std::string>(), vars);
            SquarefreeParts sp = squarefree_decompose(B);
            out["B"] = B.to_string(vars);
            out["Q"] = sp.Q.to_string(vars);
            out["D"] = sp.D.to_string(vars);
            out["unit"] = sp.unit.to_string(vars);
            out["reconstruction"] = reconstruction_json(reconstruct_from_kernel(sp.unit * sp.D), vars);
        }
        json ts = json::array();
        for (const auto& t : g.at("triples")) {
            std::array<std::string, 3> s{t.at(0).get<std::string>(), t.at(1).get<std::string>(),
                                         t.at(2).get<std::string>()};
            json x = classify_triple_report(s, vars).doc.at("triple");
            ts.push_back(x);
        }
        out["triples"] = ts;
        groups.push_back(out);
    }
    r.doc["groups"] = groups;
    return r;
}

Report demo_59(const std::string& dir) {
    ExactMatrix L = fixture(dir, "ex59_left.json"), R = as_right_factor(fixture(dir, "ex59_right.json"));
    TermMap h = cauchy_binet_terms(L, R);
    auto names = names_of(R);
    Report r;
    json& j = r.doc;
    j["command"] = "demo";
    j["example"] = "5.9";
    j["discriminant"] = R.disc() ? R.disc()->to_string(names) : "";
    long zero_minors = 0, non_monomial = 0;
    for (const auto& v : h.right.values) zero_minors += v.is_zero();
    for (const auto& v : h.values) non_monomial += !v.is_zero() && !as_monomial(v);
    j["right_minors"] = h.right.values.size();
    j["right_zero_minors"] = zero_minors;
    j["non_monomial_terms"] = non_monomial;
    auto mc = monomial_condition(h);
    if (auto* m = std::get_if<MonomialAssignment>(&mc)) {
        CurvatureScan s = curvature_scan(*m);
        j["curvature_evaluable"] = s.evaluable;
        j["curvature_nonzero"] = s.nonzero.size();
        if (!s.nonzero.empty()) j["first_nonzero_curvature"] = witness_json(s.nonzero.front());
    }
    MinorFn right = minor_fn(h.right);
    long radical = 0, kappa_bad = 0;
    std::map<std::string, long> types;
    YAssignment y = assignment_from_right(right, h.n, h.k);
    for (const auto& [c, v] : y.entries()) radical += !v.in_base_field();
    for (Mask I : k_subsets(h.n, h.k)) kappa_bad += static_cast<long>(kappa_check(y, I).violations.size());
    Report cl = classify_report(L, R, {}, 0);
    j["y_terms"] = y.size();
    j["radical_y_terms"] = radical;
    j["kappa_violations"] = kappa_bad;
    j["types"] = cl.doc.at("counts");
    return r;
}

}  // namespace

Report demo_report(const std::string& example, const std::string& data_dir) {
    if (example == "1.2") return demo_12(data_dir);
    if (example == "4.1") return demo_41(data_dir);
    if (example == "5.3") return demo_53(data_dir);
    if (example == "5.9") return demo_59(data_dir);
    throw InputError("unknown example '" + example + "' (expected 1.2, 4.1, 5.3 or 5.9)");
}

}  // namespace cbr
