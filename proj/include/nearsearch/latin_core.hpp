#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nearsearch {

using Symbol = int;

// A cell is Empty, a Marker (some symbol from the search pool, value unknown),
// or a concrete symbol.
class Cell {
public:
    constexpr Cell() = default;

    static constexpr Cell empty() { return Cell{kEmpty}; }
    static constexpr Cell marker() { return Cell{kMarker}; }
    static constexpr Cell symbol(Symbol s) { return Cell{static_cast<std::int32_t>(s)}; }

    constexpr bool is_empty() const { return raw_ == kEmpty; }
    constexpr bool is_marker() const { return raw_ == kMarker; }
    constexpr bool is_symbol() const { return raw_ >= 0; }
    // Concrete symbol or Marker.
    constexpr bool is_filled() const { return raw_ != kEmpty; }
    constexpr Symbol value() const { return raw_; }

    friend constexpr bool operator==(Cell, Cell) = default;

private:
    static constexpr std::int32_t kEmpty = -1;
    static constexpr std::int32_t kMarker = -2;

    constexpr explicit Cell(std::int32_t raw) : raw_(raw) {}

    std::int32_t raw_ = kEmpty;
};

class PartialLatinArray {
public:
    PartialLatinArray(int rows, int cols, int universe);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int universe() const { return universe_; }
    bool is_square() const { return rows_ == cols_; }

    Cell at(int r, int c) const { return cells_[index(r, c)]; }
    // Unchecked write. Use check_latin() to validate the result.
    void set(int r, int c, Cell cell) { cells_[index(r, c)] = cell; }

    std::span<const Cell> cells() const { return cells_; }

    int count_symbols() const;
    int count_markers() const;

    friend bool operator==(const PartialLatinArray&, const PartialLatinArray&) = default;

private:
    std::size_t index(int r, int c) const;

    int rows_;
    int cols_;
    int universe_;
    std::vector<Cell> cells_;
};

// sigma[row] = column.
class DiagonalPerm {
public:
    DiagonalPerm() = default;
    explicit DiagonalPerm(std::vector<int> sigma);

    static DiagonalPerm identity(int n);

    int size() const { return static_cast<int>(sigma_.size()); }
    int operator[](int row) const { return sigma_[static_cast<std::size_t>(row)]; }
    const std::vector<int>& columns() const { return sigma_; }
    bool is_identity() const;
    void swap_rows(int a, int b);

    friend bool operator==(const DiagonalPerm&, const DiagonalPerm&) = default;

private:
    std::vector<int> sigma_;
};

struct Entry {
    int row;
    int col;
    Symbol symbol;

    friend auto operator<=>(const Entry&, const Entry&) = default;
};

// Entries are kept sorted by row.
struct PartialTransversal {
    std::vector<Entry> entries;

    int length() const { return static_cast<int>(entries.size()); }
    bool is_valid() const;

    friend auto operator<=>(const PartialTransversal&, const PartialTransversal&) = default;
};

class GridParseError : public std::runtime_error {
public:
    GridParseError(int line, int column, const std::string& what);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

PartialLatinArray parse_array(std::string_view text);
// Like parse_array but skips the row/column duplicate check.
PartialLatinArray parse_grid(std::string_view text);
std::string serialize_array(const PartialLatinArray& a);

struct LatinViolation {
    enum class Kind { Row, Column };
    Kind kind;
    int row;
    int col;
    Symbol symbol;

    friend bool operator==(const LatinViolation&, const LatinViolation&) = default;
};

// Every cell whose concrete symbol already occurred earlier in its row
// (resp. column) is reported once for that line. Markers and Empties never
// conflict.
struct LatinReport {
    std::vector<LatinViolation> row_violations;
    std::vector<LatinViolation> column_violations;

    bool row_latin() const { return row_violations.empty(); }
    bool column_latin() const { return column_violations.empty(); }
    bool ok() const { return row_latin() && column_latin(); }
};

LatinReport check_latin(const PartialLatinArray& a);

int diagonal_weight(const PartialLatinArray& a, const DiagonalPerm& d);

// Symbols of `pool` that are absent from row r and column c.
int liberties(const PartialLatinArray& a, int r, int c, std::span<const Symbol> pool);

struct CellPos {
    int row;
    int col;
};

// All partial transversals of exactly `length` concrete entries, optionally
// forced through one cell. Output is lexicographic in the row-sorted entry list.
std::vector<PartialTransversal> enumerate_partial_transversals(const PartialLatinArray& a, int length,
                                                               std::optional<CellPos> through = std::nullopt);

}  // namespace nearsearch
