#pragma once

// Reference grids: residue tables of Q_0, Q_1, Q_2 and A modulo 2^k with
// their periods and exact 2-factor rows, the period summary table, and the
// c_k zero table. Rendered as aligned text or CSV (the golden-file format).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "escf/exact.hpp"
#include "escf/modular.hpp"
#include "escf/two_adic.hpp"
#include "escf/valuation.hpp"

namespace escf::tables {

struct TableGrid {
    std::string title;
    std::vector<std::string> col_labels;
    struct Row {
        std::string label;
        std::vector<std::string> cells;
    };
    std::vector<Row> rows;
};

namespace detail {

inline TableGrid residue_table(modular::Seq s, const std::string& title, unsigned k_max,
                               unsigned n_max) {
    TableGrid g;
    g.title = title;
    g.col_labels.push_back("k");
    for (unsigned n = 0; n <= n_max; ++n) g.col_labels.push_back("n" + std::to_string(n));
    g.col_labels.push_back("period");
    for (unsigned k = 1; k <= k_max; ++k) {
        TableGrid::Row row;
        row.label = std::to_string(k);
        modular::ModStream st(s, std::uint64_t(1) << k);
        for (unsigned n = 0; n <= n_max; ++n) row.cells.push_back(std::to_string(st.next()));
        row.cells.push_back(std::to_string(modular::period_of(s, std::uint64_t(1) << k).period));
        g.rows.push_back(std::move(row));
    }
    // exact 2-factor footer
    TableGrid::Row foot;
    foot.label = "[x]_2";
    if (s == modular::Seq::A) {
        exact::TaylorGen tg;
        for (unsigned n = 0; n <= n_max; ++n, tg.advance())
            foot.cells.push_back(two_factor(tg.term().a).factor_string());
    } else {
        unsigned off = s == modular::Seq::Q1 ? 1 : (s == modular::Seq::Q2 ? 2 : 0);
        exact::ConvergentGen cg;
        for (unsigned n = 0; n <= n_max; ++n) {
            while (cg.term().n < 3 * static_cast<std::uint64_t>(n) + off) cg.advance();
            foot.cells.push_back(two_factor(cg.term().q).factor_string());
        }
    }
    foot.cells.push_back("-");
    g.rows.push_back(std::move(foot));
    return g;
}

inline TableGrid period_table(unsigned k_max) {
    TableGrid g;
    g.title = "periods of Q_i(n) mod 2^k";
    g.col_labels.push_back("seq");
    for (unsigned k = 1; k <= k_max; ++k) g.col_labels.push_back("k" + std::to_string(k));
    g.col_labels.push_back("conjecture");
    const modular::Seq seqs[3] = {modular::Seq::Q0, modular::Seq::Q1, modular::Seq::Q2};
    const char* formulas[3] = {"2^(k-2) for k>3", "2^(k-1) for k>2", "2^(k-1) for k>2"};
    for (int i = 0; i < 3; ++i) {
        TableGrid::Row row;
        row.label = modular::seq_name(seqs[i]);
        for (unsigned k = 1; k <= k_max; ++k)
            row.cells.push_back(
                std::to_string(modular::period_of(seqs[i], std::uint64_t(1) << k).period));
        row.cells.push_back(formulas[i]);
        g.rows.push_back(std::move(row));
    }
    return g;
}

inline TableGrid zero_table(unsigned k_max) {
    TableGrid g;
    g.title = "zeros c_k of A mod 2^k";
    g.col_labels = {"k", "c_k_decimal", "c_k_reverse_binary", "delta"};
    auto scan = twoadic::zero_scan(k_max);
    if (!scan.violations.empty())
        throw std::runtime_error("zero_table: zero_scan reported violations");
    std::uint64_t prev = 0;
    for (const auto& t : scan.traces) {
        TableGrid::Row row;
        row.label = std::to_string(t.k);
        row.cells.push_back(std::to_string(t.c));
        row.cells.push_back(t.digits);
        if (t.k == 1) {
            row.cells.push_back("-");
        } else {
            std::uint64_t delta = t.c - prev;
            if (delta == 0) row.cells.push_back("0");
            else row.cells.push_back("2^" + std::to_string(std::countr_zero(delta)));
        }
        prev = t.c;
        g.rows.push_back(std::move(row));
    }
    return g;
}

}  // namespace detail

// Table ids: 1/2/3 = Q_0/Q_1/Q_2 mod 2^k, 4 = period summary, 5 = A mod 2^k,
// 6 = c_k zero table. For 4 and 6 n_max is not used.
inline TableGrid emit_table(int table_id, unsigned k_max, unsigned n_max) {
    if (k_max < 1 || k_max > 30) throw std::invalid_argument("emit_table: k_max in [1,30]");
    switch (table_id) {
        case 1: return detail::residue_table(modular::Seq::Q0, "Q_0(n) mod 2^k", k_max, n_max);
        case 2: return detail::residue_table(modular::Seq::Q1, "Q_1(n) mod 2^k", k_max, n_max);
        case 3: return detail::residue_table(modular::Seq::Q2, "Q_2(n) mod 2^k", k_max, n_max);
        case 4: return detail::period_table(k_max);
        case 5: return detail::residue_table(modular::Seq::A, "A(n) mod 2^k", k_max, n_max);
        case 6: return detail::zero_table(k_max);
        default: throw std::invalid_argument("emit_table: table id in [1,6]");
    }
}

inline std::string render_csv(const TableGrid& g) {
    std::string out;
    for (std::size_t i = 0; i < g.col_labels.size(); ++i) {
        if (i) out += ',';
        out += g.col_labels[i];
    }
    out += '\n';
    for (const auto& row : g.rows) {
        out += row.label;
        for (const auto& c : row.cells) {
            out += ',';
            out += c;
        }
        out += '\n';
    }
    return out;
}

inline std::string render_text(const TableGrid& g) {
    std::vector<std::size_t> w(g.col_labels.size());
    for (std::size_t i = 0; i < g.col_labels.size(); ++i) w[i] = g.col_labels[i].size();
    for (const auto& row : g.rows) {
        w[0] = std::max(w[0], row.label.size());
        for (std::size_t i = 0; i < row.cells.size(); ++i)
            w[i + 1] = std::max(w[i + 1], row.cells[i].size());
    }
    std::string out = g.title + "\n";
    auto pad = [](const std::string& s, std::size_t width) {
        return std::string(width - s.size(), ' ') + s;
    };
    for (std::size_t i = 0; i < g.col_labels.size(); ++i) {
        if (i) out += "  ";
        out += pad(g.col_labels[i], w[i]);
    }
    out += '\n';
    for (const auto& row : g.rows) {
        out += pad(row.label, w[0]);
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            out += "  ";
            out += pad(row.cells[i], w[i + 1]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace escf::tables
