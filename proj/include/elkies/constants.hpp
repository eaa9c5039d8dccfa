#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "elkies/errors.hpp"
#include "elkies/reference_tables.hpp"

namespace elkies {

inline constexpr double euler_gamma = 0.577215664901533;
inline constexpr double log_4pi = 2.53102424696929;

enum class Parity { odd, even };  // chi(-1) = -1 or +1

inline const char* to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

// C1(X0) = gamma + 2 - log(4 pi) + 1.84 / sqrt(X0)
inline double c1(double X0) {
    if (!(X0 >= 2)) throw invalid_input_error("c1 requires X0 >= 2");
    return euler_gamma + 2 - log_4pi + 1.84 / std::sqrt(X0);
}

// C2(X0, m0): the odd and even characters share the leading product and differ in
// the trailing term, 2 / (sqrt(X0) log m0) versus (1 + log X0) / (sqrt(X0) log m0).
inline double c2(double X0, double m0, Parity parity) {
    if (!(m0 > 1)) throw invalid_input_error("c2 requires m0 > 1");
    if (!(X0 >= 3)) throw invalid_input_error("c2 requires X0 >= 3");
    const double sx = std::sqrt(X0);
    const double lm = std::log(m0);
    const double lead = 2.0 / 3.0 * (1 + 2 / sx + 3 / (X0 * sx)) * (1 + 5 / (3 * lm));
    const double tail = parity == Parity::odd ? 2 / (sx * lm) : (1 + std::log(X0)) / (sx * lm);
    return lead + tail;
}

// Smallest multiple of 1/1000 that is >= raw, as an integer count of thousandths.
inline long long ceil_thousandths(double raw) {
    auto k = static_cast<long long>(std::ceil(raw * 1000));
    while (double(k) / 1000 < raw) ++k;
    while (double(k - 1) / 1000 >= raw) --k;
    return k;
}

inline std::string format_thousandths(long long k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%03lld", k / 1000, k % 1000);
    return buf;
}

enum class TableKind { c1, c2_odd, c2_even };

inline const char* to_string(TableKind k) {
    switch (k) {
        case TableKind::c1: return "C1";
        case TableKind::c2_odd: return "C2_odd";
        case TableKind::c2_even: return "C2_even";
    }
    return "?";
}

inline const std::array<double, 9>& table_rows() {
    static const std::array<double, 9> rows = {10, 16, 32, 64, 128, 256, 512, 1024, 2048};
    return rows;
}

inline const std::array<double, 11>& table_cols() {
    static const std::array<double, 11> cols = {3, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};
    return cols;
}

struct ConstantTable {
    TableKind kind = TableKind::c1;
    std::vector<double> rows;  // X0
    std::vector<double> cols;  // m0, empty for C1
    std::vector<std::vector<double>> raw;
    std::vector<std::vector<std::string>> cells;  // ceiling-rounded to 3 decimals

    // C1 is stored as a single row indexed by X0.
    std::size_t row_count() const { return raw.size(); }
};

inline ConstantTable render_table(TableKind kind) {
    ConstantTable t;
    t.kind = kind;
    t.rows.assign(table_rows().begin(), table_rows().end());
    if (kind == TableKind::c1) {
        std::vector<double> raw;
        std::vector<std::string> cells;
        for (double x0 : t.rows) {
            raw.push_back(c1(x0));
            cells.push_back(format_thousandths(ceil_thousandths(raw.back())));
        }
        t.raw.push_back(std::move(raw));
        t.cells.push_back(std::move(cells));
        return t;
    }
    t.cols.assign(table_cols().begin(), table_cols().end());
    const Parity parity = kind == TableKind::c2_odd ? Parity::odd : Parity::even;
    for (double x0 : t.rows) {
        std::vector<double> raw;
        std::vector<std::string> cells;
        for (double m0 : t.cols) {
            raw.push_back(c2(x0, m0, parity));
            cells.push_back(format_thousandths(ceil_thousandths(raw.back())));
        }
        t.raw.push_back(std::move(raw));
        t.cells.push_back(std::move(cells));
    }
    return t;
}

inline std::vector<std::vector<std::string>> parse_reference(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    auto flush_cell = [&] {
        if (!cell.empty()) row.push_back(std::move(cell));
        cell.clear();
    };
    for (char c : text) {
        if (c == ' ') {
            flush_cell();
        } else if (c == '\n') {
            flush_cell();
            rows.push_back(std::move(row));
            row.clear();
        } else {
            cell += c;
        }
    }
    flush_cell();
    if (!row.empty()) rows.push_back(std::move(row));
    return rows;
}

inline std::vector<std::vector<std::string>> reference_cells(TableKind kind) {
    switch (kind) {
        case TableKind::c1: return parse_reference(reference::c1_table);
        case TableKind::c2_odd: return parse_reference(reference::c2_odd_table);
        case TableKind::c2_even: return parse_reference(reference::c2_even_table);
    }
    return {};
}

struct TableDiff {
    TableKind kind;
    double X0;
    double m0;  // 0 for C1
    std::string computed;
    std::string reference;
    double raw;
};

inline std::vector<TableDiff> diff_against_reference(const ConstantTable& t) {
    const auto ref = reference_cells(t.kind);
    std::vector<TableDiff> diffs;
    if (ref.size() != t.cells.size()) throw verification_error("reference table shape mismatch");
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        if (ref[i].size() != t.cells[i].size()) throw verification_error("reference table shape mismatch");
        for (std::size_t j = 0; j < t.cells[i].size(); ++j) {
            if (t.cells[i][j] == ref[i][j]) continue;
            const bool is_c1 = t.kind == TableKind::c1;
            diffs.push_back({t.kind, is_c1 ? t.rows[j] : t.rows[i], is_c1 ? 0.0 : t.cols[j], t.cells[i][j], ref[i][j],
                             t.raw[i][j]});
        }
    }
    return diffs;
}

struct TablesReport {
    std::vector<ConstantTable> tables;
    std::vector<TableDiff> diffs;
    // C2 tables must reproduce exactly; C1 differences are reported only.
    bool exact_tables_match = true;
};

inline TablesReport render_tables(const std::vector<TableKind>& kinds = {TableKind::c1, TableKind::c2_odd,
                                                                         TableKind::c2_even}) {
    TablesReport rep;
    for (TableKind k : kinds) {
        rep.tables.push_back(render_table(k));
        auto d = diff_against_reference(rep.tables.back());
        if (k != TableKind::c1 && !d.empty()) rep.exact_tables_match = false;
        rep.diffs.insert(rep.diffs.end(), d.begin(), d.end());
    }
    return rep;
}

// Printed C2 for the largest table row X0 <= X and column m0 <= conductor,
// or a negative value when no cell applies.
inline double table_c2(double X, double conductor, Parity parity) {
    const auto& rows = table_rows();
    const auto& cols = table_cols();
    int ri = -1, ci = -1;
    for (int i = 0; i < int(rows.size()); ++i) {
        if (rows[std::size_t(i)] <= X) ri = i;
    }
    for (int j = 0; j < int(cols.size()); ++j) {
        if (cols[std::size_t(j)] <= conductor) ci = j;
    }
    if (ri < 0 || ci < 0) return -1;
    return double(ceil_thousandths(c2(rows[std::size_t(ri)], cols[std::size_t(ci)], parity))) / 1000;
}

}  // namespace elkies
