#include "hmhd/ledger.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "hmhd/nonlinear.hpp"
#include "term_expr.hpp"

namespace hmhd {

using namespace detail;

bool CancellationReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const CancellationCheck* CancellationReport::first_failure() const
{
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

double CancellationReport::worst_ratio() const
{
    double w = 0.0;
    for (const auto& c : checks)
        if (c.scale > 0.0) w = std::max(w, c.abs_residual / c.scale);
    return w;
}

void CancellationReport::append(const CancellationReport& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void CancellationReport::add(std::string name, double lhs, double expected, double scale, double tol,
                             std::vector<std::string> labels)
{
    CancellationCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.expected = expected;
    c.abs_residual = std::abs(lhs - expected);
    c.scale = scale;
    c.tol = tol;
    c.pass = std::isfinite(c.abs_residual) && c.abs_residual <= tol * scale;
    c.labels = std::move(labels);
    checks.push_back(std::move(c));
}

bool TermLedger::has(const std::string& label) const
{
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.label == label; });
}

namespace {

const LedgerEntry& entry(const TermLedger& l, const std::string& label)
{
    for (const auto& e : l.entries)
        if (e.label == label) return e;
    throw std::out_of_range("ledger has no label " + label);
}

}

double TermLedger::value(const std::string& label) const { return entry(*this, label).value; }
double TermLedger::scale(const std::string& label) const { return entry(*this, label).scale; }

std::uint64_t field_hash(const VectorField& b)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](const void* p, std::size_t n) {
        const auto* s = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= s[i];
            h *= 0x100000001b3ULL;
        }
    };
    const Grid& g = b.grid();
    mix(&g.dim, sizeof g.dim);
    mix(g.n.data(), sizeof(int) * 3);
    mix(&g.band_limit, sizeof g.band_limit);
    for (const auto& c : b.c) mix(c.coeffs().data(), c.coeffs().size() * sizeof(cplx));
    return h;
}

namespace {

// Row (sign, p, Y, q, Z) of a family: I-term 2 s d_k X d_k d_p Y d_l^2 d_q Z,
// II-term -s d_k^2 d_l X d_p Y d_l d_q Z.
struct Row {
    int sign, p, y, q, z;
};

struct Family {
    const char* tag;
    int x;
    std::array<Row, 8> rows;
    std::array<int, 2> cancelling;
};

const std::array<Family, 3> families{{
    {"1,3", 3,
     {{{-1, 1, 3, 2, 3}, {1, 1, 3, 3, 2}, {1, 3, 1, 2, 3}, {-1, 3, 1, 3, 2},
       {1, 2, 3, 1, 3}, {-1, 2, 3, 3, 1}, {-1, 3, 2, 1, 3}, {1, 3, 2, 3, 1}}},
     {1, 5}},
    {"2,5", 2,
     {{{-1, 1, 2, 2, 3}, {1, 1, 2, 3, 2}, {1, 2, 1, 2, 3}, {-1, 2, 1, 3, 2},
       {1, 2, 3, 1, 2}, {-1, 2, 3, 2, 1}, {-1, 3, 2, 1, 2}, {1, 3, 2, 2, 1}}},
     {2, 7}},
    {"4,6", 1,
     {{{-1, 1, 2, 1, 3}, {1, 1, 2, 3, 1}, {1, 2, 1, 1, 3}, {-1, 2, 1, 3, 1},
       {1, 1, 3, 1, 2}, {-1, 1, 3, 2, 1}, {-1, 3, 1, 1, 2}, {1, 3, 1, 2, 1}}},
     {4, 8}},
}};

std::string family_label(const char* prefix, const Family& f, int l)
{
    return std::string(prefix) + "_{" + f.tag + "," + std::to_string(l) + "}";
}

Expr first_family_term(const Family& f, const Row& r)
{
    return {{2.0 * r.sign, {B(f.x, {kSum}), B(r.y, {kSum, r.p}), B(r.z, {lSum, lSum, r.q})}}};
}

Expr second_family_term(const Family& f, const Row& r)
{
    return {{-1.0 * r.sign, {B(f.x, {kSum, kSum, lSum}), B(r.y, {r.p}), B(r.z, {lSum, r.q})}}};
}

// I_i and II_i.
const std::array<Expr, 6>& first_terms()
{
    static const std::array<Expr, 6> t{{
        {{2.0, {J(2, {kSum}), B(3, {kSum}), J(1, {lSum, lSum})}}},
        {{-2.0, {J(3, {kSum}), B(2, {kSum}), J(1, {lSum, lSum})}}},
        {{-2.0, {J(1, {kSum}), B(3, {kSum}), J(2, {lSum, lSum})}}},
        {{2.0, {J(3, {kSum}), B(1, {kSum}), J(2, {lSum, lSum})}}},
        {{2.0, {J(1, {kSum}), B(2, {kSum}), J(3, {lSum, lSum})}}},
        {{-2.0, {J(2, {kSum}), B(1, {kSum}), J(3, {lSum, lSum})}}},
    }};
    return t;
}

const std::array<Expr, 6>& second_terms()
{
    static const std::array<Expr, 6> t{{
        {{1.0, {J(2), B(3, {kSum, kSum}), J(1, {lSum, lSum})}}},
        {{-1.0, {J(3), B(2, {kSum, kSum}), J(1, {lSum, lSum})}}},
        {{-1.0, {J(1), B(3, {kSum, kSum}), J(2, {lSum, lSum})}}},
        {{1.0, {J(3), B(1, {kSum, kSum}), J(2, {lSum, lSum})}}},
        {{1.0, {J(1), B(2, {kSum, kSum}), J(3, {lSum, lSum})}}},
        {{-1.0, {J(2), B(1, {kSum, kSum}), J(3, {lSum, lSum})}}},
    }};
    return t;
}

// Paired forms of I_a + I_c, and of II_a + II_c after integrating by parts, per family.
const std::array<Expr, 3>& first_pair_forms()
{
    static const std::array<Expr, 3> t{{
        {{2.0, {B(3, {kSum}), J(2, {kSum}), J(1, {lSum, lSum})}},
         {-2.0, {B(3, {kSum}), J(1, {kSum}), J(2, {lSum, lSum})}}},
        {{-2.0, {B(2, {kSum}), J(3, {kSum}), J(1, {lSum, lSum})}},
         {2.0, {B(2, {kSum}), J(1, {kSum}), J(3, {lSum, lSum})}}},
        {{2.0, {B(1, {kSum}), J(3, {kSum}), J(2, {lSum, lSum})}},
         {-2.0, {B(1, {kSum}), J(2, {kSum}), J(3, {lSum, lSum})}}},
    }};
    return t;
}

const std::array<Expr, 3>& second_pair_forms()
{
    static const std::array<Expr, 3> t{{
        {{-1.0, {B(3, {kSum, kSum, lSum}), J(2), J(1, {lSum})}},
         {1.0, {B(3, {kSum, kSum, lSum}), J(1), J(2, {lSum})}}},
        {{1.0, {B(2, {kSum, kSum, lSum}), J(3), J(1, {lSum})}},
         {-1.0, {B(2, {kSum, kSum, lSum}), J(1), J(3, {lSum})}}},
        {{-1.0, {B(1, {kSum, kSum, lSum}), J(3), J(2, {lSum})}},
         {1.0, {B(1, {kSum, kSum, lSum}), J(2), J(3, {lSum})}}},
    }};
    return t;
}

// Pair indices of each family: first pair (a, c) for I, II.
constexpr std::array<std::array<int, 2>, 3> pair_index{{{1, 3}, {2, 5}, {4, 6}}};

// V_1..V_8 and VI_1..VI_8: the (k, l) = (1,1), (1,2), (2,1), (2,2) terms of the l = 5, 6 members
// of the II_{2,5} and II_{4,6} families on a 2-D grid.
Expr v_term(bool vi, int index)
{
    static const std::array<std::array<int, 2>, 4> kl{{{1, 1}, {1, 2}, {2, 1}, {2, 2}}};
    auto [k, l] = kl[(index - 1) / 2];
    const int x = vi ? 1 : 2;
    const Factor mid = vi ? B(3, {1}) : B(3, {2});
    if (index % 2 == 1) return {{-1.0, {Factor{Src::b, x, {k, k, l}}, mid, Factor{Src::b, 2, {l, 1}}}}};
    return {{1.0, {Factor{Src::b, x, {k, k, l}}, mid, Factor{Src::b, 1, {l, 2}}}}};
}

void add_entry(TermLedger& l, std::string label, Evaluation e)
{
    l.entries.push_back({std::move(label), e.value, e.scale});
}

double max_scale(const TermLedger& l, const std::vector<std::string>& labels, double extra = 0.0)
{
    double s = extra;
    for (const auto& x : labels) s = std::max(s, l.scale(x));
    return s;
}

double sum_values(const TermLedger& l, const std::vector<std::string>& labels)
{
    double s = 0.0;
    for (const auto& x : labels) s += l.value(x);
    return s;
}

std::vector<std::string> surviving_labels()
{
    std::vector<std::string> out;
    for (const char* prefix : {"I", "II"})
        for (const auto& f : families)
            for (int l = 1; l <= 8; ++l)
                if (l != f.cancelling[0] && l != f.cancelling[1]) out.push_back(family_label(prefix, f, l));
    return out;
}

}

PairingForms pairing_h2_forms(const VectorField& b)
{
    const int band = b.effective_band();
    Grid lg = lifted_grid(b.grid(), 2 * band);
    VectorField bl = resample(b, lg);
    VectorField j = current_density(bl);
    VectorField jxb = cross_product_truncated(j, bl);
    PairingForms r;
    r.curl_form = inner_product(laplacian(curl(jxb)), laplacian(bl));
    for (int k = 1; k <= lg.dim; ++k)
        for (int l = 1; l <= lg.dim; ++l) {
            Mode dk{0, 0, 0}, dl{0, 0, 0};
            dk[k - 1] = 2;
            dl[l - 1] = 2;
            double v = 0.0;
            for (int c = 0; c < 3; ++c) v += inner_product(derivative(jxb[c], dk), derivative(j[c], dl));
            r.split_form += v;
            r.scale = std::max(r.scale, std::abs(v));
        }
    return r;
}

double pairing_h2(const VectorField& b) { return pairing_h2_forms(b).split_form; }

TermLedger build_ledger(const VectorField& b, const LedgerOptions& opt)
{
    Evaluator ev(b);
    TermLedger L;
    L.dim = b.grid().dim;
    L.field_hash = field_hash(b);

    add_entry(L, "I", ev.cross_form_first());
    add_entry(L, "II", ev.cross_form_second());
    for (int i = 0; i < 6; ++i) add_entry(L, "I_" + std::to_string(i + 1), ev.eval(first_terms()[i]));
    for (int i = 0; i < 6; ++i) add_entry(L, "II_" + std::to_string(i + 1), ev.eval(second_terms()[i]));
    for (const auto& f : families)
        for (int l = 1; l <= 8; ++l) add_entry(L, family_label("I", f, l), ev.eval(first_family_term(f, f.rows[l - 1])));
    for (const auto& f : families)
        for (int l = 1; l <= 8; ++l)
            add_entry(L, family_label("II", f, l), ev.eval(second_family_term(f, f.rows[l - 1])));
    if (L.dim == 2) {
        for (int i = 1; i <= 8; ++i) add_entry(L, "V_" + std::to_string(i), ev.eval(v_term(false, i)));
        for (int i = 1; i <= 8; ++i) add_entry(L, "VI_" + std::to_string(i), ev.eval(v_term(true, i)));
    }

    if (!opt.flip_sign_label.empty()) {
        auto it = std::find_if(L.entries.begin(), L.entries.end(),
                               [&](const auto& e) { return e.label == opt.flip_sign_label; });
        if (it == L.entries.end()) throw std::invalid_argument("unknown ledger label " + opt.flip_sign_label);
        it->value = -it->value;
    }

    auto& R = L.internal;
    for (const char* prefix : {"I", "II"}) {
        std::vector<std::string> parts;
        for (int i = 1; i <= 6; ++i) parts.push_back(std::string(prefix) + "_" + std::to_string(i));
        auto labels = parts;
        labels.insert(labels.begin(), prefix);
        R.add(std::string(prefix) + " = sum of " + prefix + "_i", L.value(prefix), sum_values(L, parts),
              max_scale(L, labels), tol_fourth_order, labels);
    }
    PairingForms pf = pairing_h2_forms(b);
    R.add("pairing: curl form = split form", pf.curl_form, pf.split_form,
          std::max(pf.scale, std::abs(pf.curl_form)), tol_fourth_order);
    R.add("pairing = I + II", pf.split_form, L.value("I") + L.value("II"),
          max_scale(L, {"I", "II"}, pf.scale), tol_fourth_order, {"I", "II"});

    for (int fi = 0; fi < 3; ++fi) {
        const auto& f = families[fi];
        for (int second = 0; second < 2; ++second) {
            const std::string prefix = second ? "II" : "I";
            const auto [a, c] = pair_index[fi];
            const std::string la = prefix + "_" + std::to_string(a), lc = prefix + "_" + std::to_string(c);
            Evaluation paired = ev.eval(second ? second_pair_forms()[fi] : first_pair_forms()[fi]);
            double lhs = L.value(la) + L.value(lc);
            R.add(la + " + " + lc + " = paired form", lhs, paired.value, max_scale(L, {la, lc}, paired.scale),
                  tol_fourth_order, {la, lc});
            std::vector<std::string> members;
            for (int l = 1; l <= 8; ++l) members.push_back(family_label(prefix.c_str(), f, l));
            auto labels = members;
            labels.push_back(la);
            labels.push_back(lc);
            R.add(la + " + " + lc + " = sum_l " + prefix + "_{" + f.tag + ",l}", sum_values(L, members), lhs,
                  max_scale(L, labels), tol_fourth_order, labels);
        }
    }
    return L;
}

std::vector<std::string> sign_flip_suspects(const CancellationCheck& check, const TermLedger& ledger)
{
    std::vector<std::string> out;
    const double residual = check.lhs - check.expected;
    for (const auto& label : check.labels) {
        if (!ledger.has(label)) continue;
        const double v = ledger.value(label);
        // The label may sit on either side of the check.
        const double best = std::min(std::abs(residual - 2.0 * v), std::abs(residual + 2.0 * v));
        if (v != 0.0 && best <= check.tol * check.scale) out.push_back(label);
    }
    return out;
}

CancellationReport check_cancellations(const TermLedger& ledger, const VectorField& b)
{
    if (ledger.field_hash != field_hash(b)) throw std::invalid_argument("check_cancellations: ledger built from a different field");
    CancellationReport R;
    for (const char* prefix : {"I", "II"})
        for (const auto& f : families) {
            std::string a = family_label(prefix, f, f.cancelling[0]);
            std::string c = family_label(prefix, f, f.cancelling[1]);
            R.add(a + " + " + c + " = 0", ledger.value(a) + ledger.value(c), 0.0, max_scale(ledger, {a, c}),
                  tol_trilinear, {a, c});
        }
    return R;
}

CancellationReport check_master_identity(const TermLedger& ledger, const VectorField& b)
{
    if (ledger.field_hash != field_hash(b))
        throw std::invalid_argument("check_master_identity: ledger built from a different field");
    auto labels = surviving_labels();
    PairingForms pf = pairing_h2_forms(b);
    CancellationReport R;
    R.add("master identity: pairing = sum of surviving terms", pf.split_form, sum_values(ledger, labels),
          max_scale(ledger, labels, pf.scale), tol_fourth_order, labels);
    return R;
}

CancellationReport check_master_identity(const VectorField& b, const LedgerOptions& opt)
{
    return check_master_identity(build_ledger(b, opt), b);
}

namespace {

double divergence_h_ratio(const VectorField& b)
{
    auto [bh, bv] = split_hv(b);
    return divergence_ratio(bh);
}

constexpr double solenoidal_tol = 1e-12;

}

const std::vector<std::string>& vi_pair_check_names()
{
    static const std::vector<std::string> names{
        "V_2 + V_5 = int d2^2 b2 d1d2 b3 d1^2 b2",
        "V_4 + V_7 = -int d2^2 b1 d1d2 b3 d2d1 b2",
        "VI_2 + VI_5 = int d1^2 b2 d1d2 b3 d1d2 b1",
        "VI_4 + VI_7 = int d1d2 b2 d2d1 b3 d2^2 b1",
    };
    return names;
}

CancellationReport check_25d_vi_cancellations(const VectorField& b, ViHypothesis h)
{
    if (b.grid().dim != 2) throw std::invalid_argument("check_25d_vi_cancellations: requires a 2-D grid");
    const bool solenoidal = h == ViHypothesis::evaluate_all || divergence_h_ratio(b) <= solenoidal_tol;
    if (h == ViHypothesis::require && !solenoidal)
        throw std::invalid_argument("check_25d_vi_cancellations: b is not divergence-free");
    Evaluator ev(b);
    std::array<Evaluation, 9> V{}, VI{};
    for (int i = 1; i <= 8; ++i) {
        V[i] = ev.eval(v_term(false, i));
        VI[i] = ev.eval(v_term(true, i));
    }
    CancellationReport R;
    auto pair_check = [&](const std::string& name, const Evaluation& x, const Evaluation& y, const Expr& rhs,
                          std::vector<std::string> labels) {
        Evaluation r = ev.eval(rhs);
        R.add(name, x.value + y.value, r.value, std::max({x.scale, y.scale, r.scale}), tol_trilinear,
              std::move(labels));
    };
    auto square_check = [&](const std::string& label, const Evaluation& x, double coef, Factor outer, Factor sq) {
        Evaluation r = ev.eval({{coef, {outer, sq, sq}}});
        R.add(label + " = half-square form", x.value, r.value, std::max(x.scale, r.scale), tol_trilinear, {label});
    };
    square_check("V_1", V[1], 0.5, B(3, {1, 2}), B(2, {1, 1}));
    square_check("V_3", V[3], 0.5, B(3, {1, 2}), B(2, {2, 1}));
    square_check("VI_6", VI[6], -0.5, B(3, {2, 1}), B(1, {1, 2}));
    square_check("VI_8", VI[8], -0.5, B(3, {2, 1}), B(1, {2, 2}));
    // The remaining rewrites substitute d1 b1 = -d2 b2.
    if (solenoidal) {
        pair_check(vi_pair_check_names()[0], V[2], V[5],
                   {{1.0, {B(2, {2, 2}), B(3, {1, 2}), B(2, {1, 1})}}}, {"V_2", "V_5"});
        pair_check(vi_pair_check_names()[1], V[4], V[7],
                   {{-1.0, {B(1, {2, 2}), B(3, {1, 2}), B(2, {2, 1})}}}, {"V_4", "V_7"});
        pair_check(vi_pair_check_names()[2], VI[2], VI[5],
                   {{1.0, {B(2, {1, 1}), B(3, {1, 2}), B(1, {1, 2})}}}, {"VI_2", "VI_5"});
        pair_check(vi_pair_check_names()[3], VI[4], VI[7],
                   {{1.0, {B(2, {1, 2}), B(3, {2, 1}), B(1, {2, 2})}}}, {"VI_4", "VI_7"});

        square_check("V_6", V[6], 0.5, B(3, {1, 2}), B(1, {1, 2}));
        square_check("V_8", V[8], 0.5, B(3, {1, 2}), B(1, {2, 2}));
        square_check("VI_1", VI[1], -0.5, B(3, {2, 1}), B(2, {1, 1}));
        square_check("VI_3", VI[3], -0.5, B(3, {2, 1}), B(2, {1, 2}));
    }

    // Sum over l in {5, 6} of II_{2,5,l} + II_{4,6,l} equals sum of V_l + VI_l.
    Evaluation lhs;
    std::vector<std::string> labels;
    for (int fi : {1, 2})
        for (int l : {5, 6}) {
            Evaluation e = ev.eval(second_family_term(families[fi], families[fi].rows[l - 1]));
            lhs.value += e.value;
            lhs.scale = std::max(lhs.scale, e.scale);
            labels.push_back(family_label("II", families[fi], l));
        }
    double rhs = 0.0, scale = lhs.scale;
    for (int i = 1; i <= 8; ++i) {
        rhs += V[i].value + VI[i].value;
        scale = std::max({scale, V[i].scale, VI[i].scale});
        labels.push_back("V_" + std::to_string(i));
        labels.push_back("VI_" + std::to_string(i));
    }
    R.add("sum_{l=5,6} (II_{2,5,l} + II_{4,6,l}) = sum_l (V_l + VI_l)", lhs.value, rhs, scale, tol_trilinear,
          labels);
    return R;
}

CancellationReport check_3d_rewrites(const VectorField& b)
{
    if (b.grid().dim != 3) throw std::invalid_argument("check_3d_rewrites: requires a 3-D grid");
    const bool solenoidal = divergence_ratio(b) <= solenoidal_tol;
    Evaluator ev(b);
    const Lin D = d3b3_solenoidal();
    const int K = kSum, L = lSum;
    CancellationReport R;
    auto group = [&](const char* prefix, int fi, std::initializer_list<int> ls) {
        Evaluation e;
        std::vector<std::string> labels;
        for (int l : ls) {
            Evaluation x = ev.eval(std::string(prefix) == "I" ? first_family_term(families[fi], families[fi].rows[l - 1])
                                                               : second_family_term(families[fi], families[fi].rows[l - 1]));
            e.value += x.value;
            e.scale = std::max(e.scale, x.scale);
            labels.push_back(family_label(prefix, families[fi], l));
        }
        return std::make_pair(e, labels);
    };
    auto check = [&](const std::string& name, const char* prefix, std::initializer_list<int> ls, const Expr& rhs) {
        auto [lhs, labels] = group(prefix, 0, ls);
        Evaluation r = ev.eval(rhs);
        R.add(name, lhs.value, r.value, std::max(lhs.scale, r.scale), tol_fourth_order, labels);
    };

    check("I_{1,3,3} + I_{1,3,7}: moved d3", "I", {3, 7},
          expand(-2, lin(B(1, {K})), lin(B(3, {K, 3})), lin(B(3, {L, L, 2}))) +
              expand(-2, lin(B(1, {K})), lin(B(3, {K})), lin(B(3, {L, L, 2, 3}))) +
              expand(2, lin(B(2, {K})), lin(B(3, {K, 3})), lin(B(3, {L, L, 1}))) +
              expand(2, lin(B(2, {K})), lin(B(3, {K})), lin(B(3, {L, L, 1, 3}))));
    check("II_{1,3,4} + II_{1,3,8}: moved d_l", "II", {4, 8},
          expand_d_product(-1, L, lin(B(1, {3})), lin(B(2, {L, 3})), lin(B(3, {K, K}))) +
              expand_d_product(1, L, lin(B(2, {3})), lin(B(1, {L, 3})), lin(B(3, {K, K}))));
    check("II_{1,3,3} + II_{1,3,7}: moved d_k", "II", {3, 7},
          expand(1, lin(B(3, {K, L})), lin(B(1, {K, 3})), lin(B(3, {L, 2}))) +
              expand(1, lin(B(3, {K, L})), lin(B(1, {3})), lin(B(3, {K, L, 2}))) +
              expand(-1, lin(B(3, {K, L})), lin(B(2, {K, 3})), lin(B(3, {L, 1}))) +
              expand(-1, lin(B(3, {K, L})), lin(B(2, {3})), lin(B(3, {K, L, 1}))));
    if (!solenoidal) return R;

    check("I_{1,3,3} + I_{1,3,7}: solenoidal form", "I", {3, 7},
          expand_d_product(2, 2, lin(B(1, {K})), d(D, {K}), lin(B(3, {L, L}))) +
              expand_d_product(2, 2, lin(B(1, {K})), lin(B(3, {K})), d(D, {L, L})) +
              expand_d_product(-2, 1, lin(B(2, {K})), d(D, {K}), lin(B(3, {L, L}))) +
              expand_d_product(-2, 1, lin(B(2, {K})), lin(B(3, {K})), d(D, {L, L})));
    check("I_{1,3,2} + I_{1,3,6}: solenoidal form", "I", {2, 6},
          expand(-2, d(D, {K}), lin(B(3, {K, 1})), lin(B(2, {L, L}))) +
              expand(-2, lin(B(3, {K})), d(D, {K, 1}), lin(B(2, {L, L}))) +
              expand(2, d(D, {K}), lin(B(3, {K, 2})), lin(B(1, {L, L}))) +
              expand(2, lin(B(3, {K})), d(D, {K, 2}), lin(B(1, {L, L}))));
    check("II_{1,3,2} + II_{1,3,6}: solenoidal form", "II", {2, 6},
          expand_d_product(-1, L, lin(B(3, {1})), lin(B(2, {L})), d(D, {K, K})) +
              expand_d_product(-1, L, d(D, {1}), lin(B(2, {L})), lin(B(3, {K, K}))) +
              expand_d_product(1, L, lin(B(3, {2})), lin(B(1, {L})), d(D, {K, K})) +
              expand_d_product(1, L, d(D, {2}), lin(B(1, {L})), lin(B(3, {K, K}))));
    check("II_{1,3,3} + II_{1,3,7}: solenoidal form", "II", {3, 7},
          expand(-1, lin(B(1, {K})), d(D, {K, L}), lin(B(3, {L, 2}))) +
              expand(-1, lin(B(1, {K})), lin(B(3, {K, L})), d(D, {L, 2})) +
              expand(1, lin(B(3, {K, L})), d(D, {K, L}), lin(B(1, {2}))) +
              expand(1, lin(B(2, {K})), d(D, {K, L}), lin(B(3, {L, 1}))) +
              expand(1, lin(B(2, {K})), lin(B(3, {K, L})), d(D, {L, 1})) +
              expand(-1, lin(B(3, {K, L})), d(D, {K, L}), lin(B(2, {1}))));
    return R;
}

}
