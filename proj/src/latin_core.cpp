#include "nearsearch/latin_core.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

namespace nearsearch {

PartialLatinArray::PartialLatinArray(int rows, int cols, int universe)
    : rows_(rows), cols_(cols), universe_(universe) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("array dimensions must be positive");
    if (universe <= 0) throw std::invalid_argument("symbol universe must be positive");
    cells_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Cell::empty());
}

std::size_t PartialLatinArray::index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("cell index out of range");
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
}

int PartialLatinArray::count_symbols() const {
    return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](Cell c) { return c.is_symbol(); }));
}

int PartialLatinArray::count_markers() const {
    return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](Cell c) { return c.is_marker(); }));
}

DiagonalPerm::DiagonalPerm(std::vector<int> sigma) : sigma_(std::move(sigma)) {
    std::vector<char> seen(sigma_.size(), 0);
    for (int c : sigma_) {
        if (c < 0 || c >= static_cast<int>(sigma_.size()) || seen[static_cast<std::size_t>(c)])
            throw std::invalid_argument("diagonal is not a permutation");
        seen[static_cast<std::size_t>(c)] = 1;
    }
}

DiagonalPerm DiagonalPerm::identity(int n) {
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    return DiagonalPerm(std::move(sigma));
}

bool DiagonalPerm::is_identity() const {
    for (std::size_t i = 0; i < sigma_.size(); ++i)
        if (sigma_[i] != static_cast<int>(i)) return false;
    return true;
}

void DiagonalPerm::swap_rows(int a, int b) {
    std::swap(sigma_.at(static_cast<std::size_t>(a)), sigma_.at(static_cast<std::size_t>(b)));
}

bool PartialTransversal::is_valid() const {
    std::set<int> rows, cols;
    std::set<Symbol> syms;
    for (const auto& e : entries) {
        if (e.symbol < 0) return false;
        if (!rows.insert(e.row).second || !cols.insert(e.col).second || !syms.insert(e.symbol).second)
            return false;
    }
    return true;
}

GridParseError::GridParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
    std::string_view text;
    int column;  // 1-based character column
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

std::optional<long long> parse_uint(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
}

}  // namespace

namespace {

struct Placed {
    Cell cell;
    int line;
    int column;
};

struct ParsedGrid {
    PartialLatinArray array;
    std::vector<Placed> placed;
};

ParsedGrid parse_positions(std::string_view text) {
    struct Line {
        int number;
        std::vector<Token> tokens;
    };
    std::vector<Line> data;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        auto tokens = tokenize(raw);
        if (tokens.empty()) continue;
        if (tokens.front().text.starts_with('#')) continue;
        data.push_back({number, std::move(tokens)});
        if (end == text.size()) break;
    }
    if (data.empty()) throw GridParseError(number, 1, "missing header line");

    const Line& header = data.front();
    if (header.tokens.size() < 2 || header.tokens.size() > 3)
        throw GridParseError(header.number, 1, "header must be 'ROWS COLS [UNIVERSE]'");
    std::vector<long long> dims;
    for (const auto& tok : header.tokens) {
        auto v = parse_uint(tok.text);
        if (!v || *v <= 0 || *v > 4096)
            throw GridParseError(header.number, tok.column, "bad header value '" + std::string(tok.text) + "'");
        dims.push_back(*v);
    }
    const int rows = static_cast<int>(dims[0]);
    const int cols = static_cast<int>(dims[1]);
    // 0 means the universe is implied by the largest symbol.
    const int universe = dims.size() == 3 ? static_cast<int>(dims[2]) : 0;

    if (static_cast<int>(data.size()) - 1 != rows) {
        int where = data.size() > static_cast<std::size_t>(rows) ? data[static_cast<std::size_t>(rows) + 1].number
                                                                 : number;
        throw GridParseError(where, 1,
                             "expected " + std::to_string(rows) + " rows, found " + std::to_string(data.size() - 1));
    }

    std::vector<Placed> placed;
    placed.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    int max_symbol = -1;
    for (int r = 0; r < rows; ++r) {
        const Line& line = data[static_cast<std::size_t>(r) + 1];
        if (static_cast<int>(line.tokens.size()) != cols)
            throw GridParseError(line.number, 1,
                                 "expected " + std::to_string(cols) + " cells, found " +
                                     std::to_string(line.tokens.size()));
        for (const auto& tok : line.tokens) {
            Cell cell;
            if (tok.text == ".") {
                cell = Cell::empty();
            } else if (tok.text == "x") {
                cell = Cell::marker();
            } else if (auto v = parse_uint(tok.text); v && *v < (1 << 20)) {
                cell = Cell::symbol(static_cast<Symbol>(*v));
                max_symbol = std::max(max_symbol, static_cast<int>(*v));
            } else {
                throw GridParseError(line.number, tok.column, "malformed token '" + std::string(tok.text) + "'");
            }
            placed.push_back({cell, line.number, tok.column});
        }
    }

    PartialLatinArray a(rows, cols, universe > 0 ? universe : std::max(1, max_symbol + 1));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Placed& p = placed[static_cast<std::size_t>(r * cols + c)];
            if (p.cell.is_symbol() && p.cell.value() >= a.universe())
                throw GridParseError(p.line, p.column,
                                     "symbol " + std::to_string(p.cell.value()) + " outside universe " +
                                         std::to_string(a.universe()));
            a.set(r, c, p.cell);
        }
    }

    return {std::move(a), std::move(placed)};
}

}  // namespace

PartialLatinArray parse_grid(std::string_view text) { return parse_positions(text).array; }

PartialLatinArray parse_array(std::string_view text) {
    auto [a, placed] = parse_positions(text);
    const int cols = a.cols();
    const LatinReport report = check_latin(a);
    auto fail = [&](const LatinViolation& v, const char* what) {
        const Placed& p = placed[static_cast<std::size_t>(v.row * cols + v.col)];
        throw GridParseError(p.line, p.column,
                             "symbol " + std::to_string(v.symbol) + " twice in " + what + " " +
                                 std::to_string(v.kind == LatinViolation::Kind::Row ? v.row : v.col));
    };
    if (!report.row_violations.empty()) fail(report.row_violations.front(), "row");
    if (!report.column_violations.empty()) fail(report.column_violations.front(), "column");
    return a;
}

std::string serialize_array(const PartialLatinArray& a) {
    int max_symbol = -1;
    for (Cell c : a.cells())
        if (c.is_symbol()) max_symbol = std::max(max_symbol, c.value());
    std::ostringstream out;
    out << a.rows() << ' ' << a.cols();
    if (a.universe() != std::max(1, max_symbol + 1)) out << ' ' << a.universe();
    out << '\n';
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) {
            if (c) out << ' ';
            Cell cell = a.at(r, c);
            if (cell.is_empty())
                out << '.';
            else if (cell.is_marker())
                out << 'x';
            else
                out << cell.value();
        }
        out << '\n';
    }
    return out.str();
}

LatinReport check_latin(const PartialLatinArray& a) {
    LatinReport report;
    std::vector<char> seen(static_cast<std::size_t>(a.universe()), 0);
    for (int r = 0; r < a.rows(); ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int c = 0; c < a.cols(); ++c) {
            Cell cell = a.at(r, c);
            if (!cell.is_symbol() || cell.value() >= a.universe()) continue;
            auto& flag = seen[static_cast<std::size_t>(cell.value())];
            if (flag) report.row_violations.push_back({LatinViolation::Kind::Row, r, c, cell.value()});
            flag = 1;
        }
    }
    for (int c = 0; c < a.cols(); ++c) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int r = 0; r < a.rows(); ++r) {
            Cell cell = a.at(r, c);
            if (!cell.is_symbol() || cell.value() >= a.universe()) continue;
            auto& flag = seen[static_cast<std::size_t>(cell.value())];
            if (flag) report.column_violations.push_back({LatinViolation::Kind::Column, r, c, cell.value()});
            flag = 1;
        }
    }
    return report;
}

int diagonal_weight(const PartialLatinArray& a, const DiagonalPerm& d) {
    if (!a.is_square() || d.size() != a.rows())
        throw std::invalid_argument("diagonal does not match array dimensions");
    std::vector<char> seen(static_cast<std::size_t>(a.universe()), 0);
    int weight = 0;
    for (int r = 0; r < a.rows(); ++r) {
        Cell cell = a.at(r, d[r]);
        if (!cell.is_symbol()) continue;
        auto& flag = seen.at(static_cast<std::size_t>(cell.value()));
        if (!flag) ++weight;
        flag = 1;
    }
    return weight;
}

int liberties(const PartialLatinArray& a, int r, int c, std::span<const Symbol> pool) {
    if (a.at(r, c).is_symbol()) throw std::invalid_argument("liberties of a concrete cell");
    std::set<Symbol> blocked;
    for (int j = 0; j < a.cols(); ++j)
        if (a.at(r, j).is_symbol()) blocked.insert(a.at(r, j).value());
    for (int i = 0; i < a.rows(); ++i)
        if (a.at(i, c).is_symbol()) blocked.insert(a.at(i, c).value());
    std::set<Symbol> distinct(pool.begin(), pool.end());
    return static_cast<int>(std::count_if(distinct.begin(), distinct.end(),
                                          [&](Symbol s) { return !blocked.contains(s); }));
}

namespace {

class TransversalEnumerator {
public:
    TransversalEnumerator(const PartialLatinArray& a, int length, std::optional<CellPos> through)
        : a_(a),
          length_(length),
          through_(through),
          used_cols_(static_cast<std::size_t>(a.cols()), 0),
          used_syms_(static_cast<std::size_t>(a.universe()), 0) {}

    std::vector<PartialTransversal> run() {
        if (through_) {
            Cell cell = a_.at(through_->row, through_->col);
            used_cols_[static_cast<std::size_t>(through_->col)] = 1;
            used_syms_[static_cast<std::size_t>(cell.value())] = 1;
        }
        descend(0, through_ ? 1 : 0);
        std::sort(out_.begin(), out_.end());
        return std::move(out_);
    }

private:
    void descend(int row, int taken) {
        if (taken == length_) {
            PartialTransversal t{current_};
            if (through_) {
                Cell cell = a_.at(through_->row, through_->col);
                t.entries.push_back({through_->row, through_->col, cell.value()});
                std::sort(t.entries.begin(), t.entries.end());
            }
            out_.push_back(std::move(t));
            return;
        }
        if (row >= a_.rows()) return;
        // Not enough rows left to reach the target length.
        const int rows_left = a_.rows() - row - ((through_ && through_->row >= row) ? 1 : 0);
        if (taken + rows_left < length_) return;
        if (through_ && row == through_->row) {
            descend(row + 1, taken);
            return;
        }
        for (int c = 0; c < a_.cols(); ++c) {
            Cell cell = a_.at(row, c);
            if (!cell.is_symbol() || used_cols_[static_cast<std::size_t>(c)] ||
                used_syms_[static_cast<std::size_t>(cell.value())])
                continue;
            used_cols_[static_cast<std::size_t>(c)] = 1;
            used_syms_[static_cast<std::size_t>(cell.value())] = 1;
            current_.push_back({row, c, cell.value()});
            descend(row + 1, taken + 1);
            current_.pop_back();
            used_cols_[static_cast<std::size_t>(c)] = 0;
            used_syms_[static_cast<std::size_t>(cell.value())] = 0;
        }
        descend(row + 1, taken);
    }

    const PartialLatinArray& a_;
    int length_;
    std::optional<CellPos> through_;
    std::vector<char> used_cols_;
    std::vector<char> used_syms_;
    std::vector<Entry> current_;
    std::vector<PartialTransversal> out_;
};

}  // namespace

std::vector<PartialTransversal> enumerate_partial_transversals(const PartialLatinArray& a, int length,
                                                               std::optional<CellPos> through) {
    if (length < 0 || length > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("partial transversal length out of range");
    if (through) {
        Cell cell = a.at(through->row, through->col);
        if (!cell.is_symbol()) throw std::invalid_argument("'through' cell is not concrete");
        if (length == 0) return {};
    }
    return TransversalEnumerator(a, length, through).run();
}

}  // namespace nearsearch
