#pragma once

// Algebra/bimodule definition files. Structured JSON with exact rational
// entries: a real entry is a "p/q" string, a complex entry is a two-element
// array ["p/q", "r/s"]. All algebra and bimodule axioms are validated before
// a parsed object is returned; failures name the violated axiom and witness
// indices.

#include <coholab/algebra.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace coholab {

using json = nlohmann::ordered_json;

inline CQ entry_to_cq(const json& e, const std::string& where) {
    try {
        if (e.is_string()) return CQ(parse_rational(e.get<std::string>()));
        if (e.is_array() && e.size() == 2 && e[0].is_string() && e[1].is_string())
            return {parse_rational(e[0].get<std::string>()), parse_rational(e[1].get<std::string>())};
    } catch (const std::invalid_argument& ex) {
        throw std::runtime_error(where + ": " + ex.what());
    }
    throw std::runtime_error(where + ": entry must be a \"p/q\" string or a [\"p/q\",\"r/s\"] pair");
}

inline json cq_to_entry(const CQ& z) {
    if (z.im == 0) return rational_to_string(z.re);
    return json::array({rational_to_string(z.re), rational_to_string(z.im)});
}

struct ParsedAlgebra {
    Algebra algebra;
    std::optional<Bimodule> bimodule;
};

namespace detail {

inline std::vector<std::vector<CQ>> parse_action(const json& j, int d_a, int d_x, const std::string& name) {
    if (!j.is_array() || int(j.size()) != d_a)
        throw std::runtime_error(name + " must list one d_X x d_X matrix per algebra basis element");
    std::vector<std::vector<CQ>> mats;
    for (int i = 0; i < d_a; ++i) {
        const json& m = j[std::size_t(i)];
        if (!m.is_array() || int(m.size()) != d_x)
            throw std::runtime_error(name + "[" + std::to_string(i) + "] must have " + std::to_string(d_x) + " rows");
        std::vector<CQ> mat(std::size_t(d_x) * d_x);
        for (int r = 0; r < d_x; ++r) {
            const json& row = m[std::size_t(r)];
            if (!row.is_array() || int(row.size()) != d_x)
                throw std::runtime_error(name + "[" + std::to_string(i) + "] row " + std::to_string(r) + " has wrong length");
            for (int c = 0; c < d_x; ++c)
                mat[std::size_t(r * d_x + c)] = entry_to_cq(row[std::size_t(c)],
                    name + "[" + std::to_string(i) + "][" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
        mats.push_back(std::move(mat));
    }
    return mats;
}

} // namespace detail

inline ParsedAlgebra parse_algebra_json(const json& j) {
    if (!j.contains("dim")) throw std::runtime_error("syntax error: missing required field 'dim'");
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw std::runtime_error("'dim' must be a positive integer");
    const int d = j["dim"].get<int>();

    std::vector<std::string> labels;
    if (j.contains("basis")) {
        for (const auto& l : j["basis"]) labels.push_back(l.get<std::string>());
        if (int(labels.size()) != d) throw std::runtime_error("'basis' must list one label per dimension");
    }

    if (!j.contains("structure")) throw std::runtime_error("syntax error: missing required field 'structure'");
    const json& s = j["structure"];
    if (!s.is_array() || int(s.size()) != d)
        throw std::runtime_error("'structure' must be a dim x dim x dim array");
    std::vector<CQ> c(std::size_t(d) * d * d);
    for (int i = 0; i < d; ++i) {
        if (!s[std::size_t(i)].is_array() || int(s[std::size_t(i)].size()) != d)
            throw std::runtime_error("'structure'[" + std::to_string(i) + "] must have dim entries");
        for (int jj = 0; jj < d; ++jj) {
            const json& vec = s[std::size_t(i)][std::size_t(jj)];
            if (!vec.is_array() || int(vec.size()) != d)
                throw std::runtime_error("'structure'[" + std::to_string(i) + "][" + std::to_string(jj) +
                                         "] must list dim coefficients");
            for (int k = 0; k < d; ++k)
                c[std::size_t((i * d + jj) * d + k)] = entry_to_cq(vec[std::size_t(k)],
                    "structure[" + std::to_string(i) + "][" + std::to_string(jj) + "][" + std::to_string(k) + "]");
        }
    }

    ParsedAlgebra out;
    out.algebra = make_algebra(d, std::move(labels), std::move(c));
    AssociativityCertificate cert = check_associativity(out.algebra);
    if (!cert.ok)
        throw std::runtime_error("associativity fails at basis triple (i,j,l) = (" + std::to_string(cert.i) +
                                 "," + std::to_string(cert.j) + "," + std::to_string(cert.l) + ")");

    if (j.contains("bimodule")) {
        const json& b = j["bimodule"];
        if (!b.contains("dim") || !b["dim"].is_number_integer() || b["dim"].get<int>() < 1)
            throw std::runtime_error("bimodule 'dim' must be a positive integer");
        const int dx = b["dim"].get<int>();
        if (!b.contains("left_action") || !b.contains("right_action"))
            throw std::runtime_error("bimodule needs 'left_action' and 'right_action'");
        Bimodule mod = make_bimodule(detail::parse_action(b["left_action"], d, dx, "left_action"),
                                     detail::parse_action(b["right_action"], d, dx, "right_action"), dx);
        BimoduleCertificate bc = check_bimodule(out.algebra, mod);
        if (!bc.ok)
            throw std::runtime_error("bimodule axiom '" + bc.axiom + "' fails at basis pair (i,j) = (" +
                                     std::to_string(bc.i) + "," + std::to_string(bc.j) + ")");
        out.bimodule = std::move(mod);
    }
    return out;
}

inline ParsedAlgebra parse_algebra_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // recover line/column from the byte offset
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < std::size_t(e.byte); ++i) {
            if (text[i] == '\n') { ++line; col = 1; } else ++col;
        }
        throw std::runtime_error("syntax error at line " + std::to_string(line) + ", column " +
                                 std::to_string(col) + ": " + e.what());
    }
    return parse_algebra_json(j);
}

inline ParsedAlgebra parse_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open algebra file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra_text(ss.str());
}

inline json algebra_to_json(const Algebra& alg, const Bimodule* mod = nullptr) {
    json j;
    j["dim"] = alg.dim;
    j["basis"] = alg.basis_labels;
    json s = json::array();
    for (int i = 0; i < alg.dim; ++i) {
        json row = json::array();
        for (int jj = 0; jj < alg.dim; ++jj) {
            json vec = json::array();
            for (int k = 0; k < alg.dim; ++k) vec.push_back(cq_to_entry(alg.c(i, jj, k)));
            row.push_back(std::move(vec));
        }
        s.push_back(std::move(row));
    }
    j["structure"] = std::move(s);
    if (mod) {
        json b;
        b["dim"] = mod->dim;
        auto action_json = [&](const std::vector<std::vector<CQ>>& mats) {
            json out = json::array();
            for (const auto& m : mats) {
                json mj = json::array();
                for (int r = 0; r < mod->dim; ++r) {
                    json row = json::array();
                    for (int c = 0; c < mod->dim; ++c) row.push_back(cq_to_entry(m[std::size_t(r * mod->dim + c)]));
                    mj.push_back(std::move(row));
                }
                out.push_back(std::move(mj));
            }
            return out;
        };
        b["left_action"] = action_json(mod->left);
        b["right_action"] = action_json(mod->right);
        j["bimodule"] = std::move(b);
    }
    return j;
}

} // namespace coholab
