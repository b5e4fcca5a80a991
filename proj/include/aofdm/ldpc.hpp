#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aofdm/common.hpp"

namespace aofdm::ldpc {

// Quasi-cyclic base matrix: entries are cyclic-shift amounts, -1 = zero
// block. Shift s means variable x[(i+s) mod z] of the block participates in
// check i.
struct QcTable {
    int z = 0;
    std::vector<std::vector<int>> rows;  // base_rows x base_cols

    int base_rows() const { return static_cast<int>(rows.size()); }
    int base_cols() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
    int n() const { return base_cols() * z; }
    int k() const { return (base_cols() - base_rows()) * z; }
};

// Rate-2/3 QC-LDPC, block length 1944, lifting factor 81 (the widely
// tabulated WLAN code). Also shipped as data/ldpc_n1944_z81_r23.txt; a unit
// test pins the two copies together.
inline const QcTable& default_table() {
    static const QcTable table{
        81,
        {
            {61, 75,  4, 63, 56, -1, -1, -1, -1, -1, -1,  8, -1,  2, 17, 25,  1,  0, -1, -1, -1, -1, -1, -1},
            {56, 74, 77, 20, -1, -1, -1, 64, 24,  4, 67, -1,  7, -1, -1, -1, -1,  0,  0, -1, -1, -1, -1, -1},
            {28, 21, 68, 10,  7, 14, 65, -1, -1, -1, 23, -1, -1, -1, 75, -1, -1, -1,  0,  0, -1, -1, -1, -1},
            {48, 38, 43, 78, 76, -1, -1, -1, -1,  5, 36, -1, 15, 72, -1, -1, -1, -1, -1,  0,  0, -1, -1, -1},
            {40,  2, 53, 25, -1, 52, 62, -1, 20, -1, -1, 44, -1, -1, -1, -1,  0, -1, -1, -1,  0,  0, -1, -1},
            {69, 23, 64, 10, 22, -1, 21, -1, -1, -1, -1, -1, 68, 23, 29, -1, -1, -1, -1, -1, -1,  0,  0, -1},
            {12,  0, 68, 20, 55, 61, -1, 40, -1, -1, -1, 52, -1, -1, -1, 44, -1, -1, -1, -1, -1, -1,  0,  0},
            {58,  8, 34, 64, 78, -1, -1, 11, 78, 24, -1, -1, -1, -1, -1, 58,  1, -1, -1, -1, -1, -1, -1,  0},
        }};
    return table;
}

inline QcTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("ldpc: cannot open table file " + path);
    QcTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (t.z == 0) {
            t.z = std::stoi(line);
            continue;
        }
        std::istringstream ls(line);
        std::vector<int> row;
        std::string tok;
        while (ls >> tok) row.push_back(tok == "-" ? -1 : std::stoi(tok));
        if (!row.empty()) t.rows.push_back(std::move(row));
    }
    if (t.z <= 0 || t.rows.empty()) throw IoError("ldpc: malformed table file " + path);
    return t;
}

struct DecodeResult {
    std::vector<uint8_t> info;
    bool converged = false;
    int iterations = 0;
};

class Code {
public:
    explicit Code(const QcTable& table = default_table()) : t_(table) {
        z_ = t_.z;
        n_ = t_.n();
        k_ = t_.k();
        m_ = n_ - k_;
        build_graph();
    }

    int n() const { return n_; }
    int k() const { return k_; }
    double rate() const { return static_cast<double>(k_) / n_; }

    // Systematic encoding via the dual-diagonal parity structure: block
    // syndromes lambda_r = sum_c P^{s_rc} u_c, then p0 = sum_r lambda_r and
    // forward substitution down the diagonal.
    std::vector<uint8_t> encode(const std::vector<uint8_t>& info) const {
        if (static_cast<int>(info.size()) != k_)
            throw std::invalid_argument("ldpc: info length must be " + std::to_string(k_));
        const int br = t_.base_rows();
        const int bc = t_.base_cols();
        const int kb = bc - br;
        std::vector<uint8_t> lambda(static_cast<std::size_t>(br) * z_, 0);
        for (int r = 0; r < br; ++r)
            for (int c = 0; c < kb; ++c) {
                const int s = t_.rows[r][c];
                if (s < 0) continue;
                for (int i = 0; i < z_; ++i)
                    lambda[r * z_ + i] ^= info[c * z_ + (i + s) % z_];
            }
        std::vector<uint8_t> parity(static_cast<std::size_t>(m_), 0);
        // p0 = sum of all block syndromes
        for (int r = 0; r < br; ++r)
            for (int i = 0; i < z_; ++i) parity[i] ^= lambda[r * z_ + i];
        // remaining parity blocks by forward substitution
        auto first_shift = [&](int r) { return t_.rows[r][kb]; };
        for (int r = 0; r < br - 1; ++r) {
            const int s0 = first_shift(r);
            for (int i = 0; i < z_; ++i) {
                uint8_t v = lambda[r * z_ + i];
                if (s0 >= 0) v ^= parity[(i + s0) % z_];
                if (r > 0) v ^= parity[r * z_ + i];
                parity[(r + 1) * z_ + i] = v;
            }
        }
        std::vector<uint8_t> cw(info);
        cw.insert(cw.end(), parity.begin(), parity.end());
        return cw;
    }

    bool check(const std::vector<uint8_t>& codeword) const {
        if (static_cast<int>(codeword.size()) != n_) return false;
        for (int c = 0; c < m_; ++c) {
            uint8_t acc = 0;
            for (int e = row_ptr_[c]; e < row_ptr_[c + 1]; ++e) acc ^= codeword[edge_var_[e]];
            if (acc) return false;
        }
        return true;
    }

    // Normalized min-sum (factor 0.75), max 50 iterations, early exit on a
    // zero syndrome. LLR convention: positive => bit 0. A run whose
    // posteriors never leave zero (e.g. all-zero input) is not converged.
    DecodeResult decode(const std::vector<double>& llrs, int max_iters = 50,
                        double alpha = 0.75) const {
        if (static_cast<int>(llrs.size()) != n_)
            throw std::invalid_argument("ldpc: LLR length must be " + std::to_string(n_));
        const int ne = static_cast<int>(edge_var_.size());
        std::vector<double> v2c(ne), c2v(ne, 0.0);
        std::vector<double> posterior(n_);
        std::vector<uint8_t> hard(n_);
        for (int e = 0; e < ne; ++e) v2c[e] = llrs[edge_var_[e]];

        DecodeResult res;
        for (int it = 1; it <= max_iters; ++it) {
            // check-node update: track min1/min2 and sign product
            for (int c = 0; c < m_; ++c) {
                double min1 = 1e300, min2 = 1e300;
                int min_edge = -1;
                int sign = 1;
                for (int e = row_ptr_[c]; e < row_ptr_[c + 1]; ++e) {
                    const double v = v2c[e];
                    if (v < 0) sign = -sign;
                    const double a = std::fabs(v);
                    if (a < min1) {
                        min2 = min1;
                        min1 = a;
                        min_edge = e;
                    } else if (a < min2) {
                        min2 = a;
                    }
                }
                for (int e = row_ptr_[c]; e < row_ptr_[c + 1]; ++e) {
                    const double mag = alpha * (e == min_edge ? min2 : min1);
                    const int s = (v2c[e] < 0 ? -sign : sign);
                    c2v[e] = s * mag;
                }
            }
            // variable-node update and posterior
            for (int v = 0; v < n_; ++v) posterior[v] = llrs[v];
            for (int e = 0; e < ne; ++e) posterior[edge_var_[e]] += c2v[e];
            for (int e = 0; e < ne; ++e) v2c[e] = posterior[edge_var_[e]] - c2v[e];
            for (int v = 0; v < n_; ++v) hard[v] = posterior[v] < 0.0 ? 1 : 0;

            res.iterations = it;
            if (check(hard)) {
                double min_abs = 1e300;
                for (int v = 0; v < n_; ++v) min_abs = std::min(min_abs, std::fabs(posterior[v]));
                res.converged = min_abs > 0.0;
                if (res.converged) break;
            }
        }
        res.info.assign(hard.begin(), hard.begin() + k_);
        return res;
    }

private:
    void build_graph() {
        const int br = t_.base_rows();
        const int bc = t_.base_cols();
        row_ptr_.assign(static_cast<std::size_t>(m_) + 1, 0);
        for (int r = 0; r < br; ++r) {
            int deg = 0;
            for (int c = 0; c < bc; ++c)
                if (t_.rows[r][c] >= 0) ++deg;
            for (int i = 0; i < z_; ++i) row_ptr_[r * z_ + i + 1] = deg;
        }
        for (int c = 1; c <= m_; ++c) row_ptr_[c] += row_ptr_[c - 1];
        edge_var_.resize(row_ptr_[m_]);
        std::vector<int> fill(m_, 0);
        for (int r = 0; r < br; ++r)
            for (int c = 0; c < bc; ++c) {
                const int s = t_.rows[r][c];
                if (s < 0) continue;
                for (int i = 0; i < z_; ++i) {
                    const int check = r * z_ + i;
                    edge_var_[row_ptr_[check] + fill[check]++] = c * z_ + (i + s) % z_;
                }
            }
    }

    QcTable t_;
    int z_ = 0, n_ = 0, k_ = 0, m_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> edge_var_;
};

}  // namespace aofdm::ldpc
