/*
GF(2) vectors and matrices, affine solution sets, and the subgroup
lattice of (Z/2)^w for small w.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixedpolar {

/// Thrown when an exhaustive computation would exceed its configured cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-length vector over GF(2). Bits are 0-indexed internally; user-facing
/// text uses 1-based positions with bit 1 leftmost.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t len) : bits_(len, 0) {}
    BitVec(std::initializer_list<int> bits) {
        bits_.reserve(bits.size());
        for (int b : bits) bits_.push_back(static_cast<std::uint8_t>(b & 1));
    }

    /// Parse from a string of '0'/'1' characters, leftmost character first.
    static BitVec from_string(const std::string& s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("BitVec: bad character");
            v.bits_[i] = static_cast<std::uint8_t>(s[i] - '0');
        }
        return v;
    }

    /// Unpack an integer symbol: bit t of the vector is (value >> t) & 1,
    /// i.e. the first coordinate is the least significant bit.
    static BitVec from_symbol(unsigned value, std::size_t width) {
        BitVec v(width);
        for (std::size_t t = 0; t < width; ++t) v.bits_[t] = static_cast<std::uint8_t>((value >> t) & 1u);
        return v;
    }

    /// Inverse of from_symbol.
    unsigned to_symbol() const {
        if (size() > 31) throw std::invalid_argument("BitVec: too wide for symbol");
        unsigned v = 0;
        for (std::size_t t = 0; t < size(); ++t) v |= static_cast<unsigned>(bits_[t]) << t;
        return v;
    }

    std::size_t size() const { return bits_.size(); }
    int operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, int v) { bits_[i] = static_cast<std::uint8_t>(v & 1); }

    BitVec& operator^=(const BitVec& o) {
        if (o.size() != size()) throw std::invalid_argument("BitVec: length mismatch");
        for (std::size_t i = 0; i < size(); ++i) bits_[i] ^= o.bits_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    bool operator==(const BitVec& o) const { return bits_ == o.bits_; }
    bool operator<(const BitVec& o) const { return bits_ < o.bits_; }

    bool is_zero() const {
        return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
    }
    std::size_t weight() const {
        std::size_t w = 0;
        for (auto b : bits_) w += b;
        return w;
    }

    BitVec slice(std::size_t start, std::size_t len) const {
        if (start + len > size()) throw std::invalid_argument("BitVec: slice out of range");
        BitVec v(len);
        for (std::size_t i = 0; i < len; ++i) v.bits_[i] = bits_[start + i];
        return v;
    }

    std::string to_string() const {
        std::string s(size(), '0');
        for (std::size_t i = 0; i < size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
        return s;
    }

  private:
    std::vector<std::uint8_t> bits_;
};

inline std::size_t hamming_distance(const BitVec& x, const BitVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d += static_cast<std::size_t>(x[i] != y[i]);
    return d;
}

/// Dense GF(2) matrix. The project-wide convention is row vector times
/// matrix: x = u * G, so G's row i is the image of unit vector e_i.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}
    explicit BitMatrix(std::vector<BitVec> rows) : rows_(std::move(rows)) {
        cols_ = rows_.empty() ? 0 : rows_[0].size();
        for (const auto& r : rows_)
            if (r.size() != cols_) throw std::invalid_argument("BitMatrix: ragged rows");
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i, 1);
        return m;
    }

    static BitMatrix from_strings(std::initializer_list<const char*> rows) {
        std::vector<BitVec> rv;
        for (const char* r : rows) rv.push_back(BitVec::from_string(r));
        return BitMatrix(std::move(rv));
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    int at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
    void set(std::size_t r, std::size_t c, int v) { rows_[r].set(c, v); }
    const BitVec& row(std::size_t r) const { return rows_[r]; }
    BitVec& row(std::size_t r) { return rows_[r]; }

    /// x * M for a row vector x of length rows().
    BitVec mul_left(const BitVec& x) const {
        if (x.size() != rows()) throw std::invalid_argument("BitMatrix: dimension mismatch");
        BitVec y(cols_);
        for (std::size_t i = 0; i < rows(); ++i)
            if (x[i]) y ^= rows_[i];
        return y;
    }

    BitMatrix mul(const BitMatrix& o) const {
        if (cols_ != o.rows()) throw std::invalid_argument("BitMatrix: dimension mismatch");
        BitMatrix r(rows(), o.cols());
        for (std::size_t i = 0; i < rows(); ++i) r.rows_[i] = o.mul_left(rows_[i]);
        return r;
    }

    bool operator==(const BitMatrix& o) const { return cols_ == o.cols_ && rows_ == o.rows_; }

    std::size_t rank() const {
        BitMatrix c = *this;
        return c.row_reduce(nullptr);
    }

    bool invertible() const { return rows() == cols() && rank() == rows(); }

    /// Inverse under the row-vector convention; throws if singular.
    BitMatrix inverse() const {
        if (rows() != cols()) throw std::invalid_argument("BitMatrix: not square");
        BitMatrix c = *this;
        BitMatrix t = identity(rows());
        std::size_t r = c.row_reduce(&t);
        if (r != rows()) throw std::invalid_argument("BitMatrix: singular");
        // After full reduction c is a permutation-free identity (RREF of a
        // nonsingular matrix), so t holds the inverse.
        return t;
    }

    /// Row-reduce in place to reduced row echelon form, mirroring the same
    /// operations on *companion if given. Returns the rank; pivot rows come
    /// first, zero rows last.
    std::size_t row_reduce(BitMatrix* companion) {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows(); ++col) {
            std::size_t p = rank;
            while (p < rows() && rows_[p][col] == 0) ++p;
            if (p == rows()) continue;
            std::swap(rows_[p], rows_[rank]);
            if (companion) std::swap(companion->rows_[p], companion->rows_[rank]);
            for (std::size_t q = 0; q < rows(); ++q) {
                if (q != rank && rows_[q][col]) {
                    rows_[q] ^= rows_[rank];
                    if (companion) companion->rows_[q] ^= companion->rows_[rank];
                }
            }
            ++rank;
        }
        return rank;
    }

  private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

/// Nonempty affine solution set {particular + span(kernel)}.
struct AffineSet {
    BitVec particular;
    std::vector<BitVec> kernel;

    std::size_t dimension() const { return kernel.size(); }
    bool unique() const { return kernel.empty(); }
};

/// Solve x * A = b for row vectors x. Returns nullopt when inconsistent.
/// The returned kernel basis is linearly independent.
inline std::optional<AffineSet> solve_affine(const BitMatrix& a, const BitVec& b) {
    if (b.size() != a.cols()) throw std::invalid_argument("solve_affine: dimension mismatch");
    BitMatrix r = a;
    BitMatrix t = BitMatrix::identity(a.rows());
    std::size_t rank = r.row_reduce(&t);

    // Pivot columns determine the coefficients of the reduced rows.
    BitVec combo(a.cols());
    BitVec x(a.rows());
    for (std::size_t i = 0; i < rank; ++i) {
        std::size_t pivot = 0;
        while (pivot < a.cols() && r.at(i, pivot) == 0) ++pivot;
        if (b[pivot]) {
            combo ^= r.row(i);
            x ^= t.row(i);
        }
    }
    if (!(combo == b)) return std::nullopt;

    AffineSet s;
    s.particular = std::move(x);
    for (std::size_t i = rank; i < a.rows(); ++i) s.kernel.push_back(t.row(i));
    return s;
}

/// Subgroup of (Z/2)^w in canonical (reduced row echelon basis) form.
class Subgroup {
  public:
    explicit Subgroup(std::size_t width) : width_(width) {}

    static Subgroup from_generators(std::size_t width, const std::vector<BitVec>& gens) {
        Subgroup h(width);
        if (gens.empty()) return h;
        BitMatrix m(gens.size(), width);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (gens[i].size() != width) throw std::invalid_argument("Subgroup: generator width mismatch");
            m.row(i) = gens[i];
        }
        std::size_t rank = m.row_reduce(nullptr);
        for (std::size_t i = 0; i < rank; ++i) h.basis_.push_back(m.row(i));
        return h;
    }

    std::size_t width() const { return width_; }
    const std::vector<BitVec>& basis() const { return basis_; }
    std::size_t dimension() const { return basis_.size(); }
    std::size_t order() const { return static_cast<std::size_t>(1) << basis_.size(); }
    bool trivial() const { return basis_.empty(); }

    bool contains(const BitVec& v) const {
        if (v.size() != width_) throw std::invalid_argument("Subgroup: width mismatch");
        BitVec r = v;
        for (const auto& bvec : basis_) {
            std::size_t pivot = 0;
            while (pivot < width_ && bvec[pivot] == 0) ++pivot;
            if (pivot < width_ && r[pivot]) r ^= bvec;
        }
        return r.is_zero();
    }

    std::vector<BitVec> elements() const {
        std::vector<BitVec> out;
        out.reserve(order());
        for (std::size_t mask = 0; mask < order(); ++mask) {
            BitVec e(width_);
            for (std::size_t i = 0; i < basis_.size(); ++i)
                if ((mask >> i) & 1) e ^= basis_[i];
            out.push_back(std::move(e));
        }
        return out;
    }

    /// Membership mask over symbol values (value v set iff v in the group).
    /// Only meaningful for width <= 5.
    std::uint32_t element_mask() const {
        std::uint32_t m = 0;
        for (const auto& e : elements()) m |= 1u << e.to_symbol();
        return m;
    }

    bool operator==(const Subgroup& o) const { return width_ == o.width_ && basis_ == o.basis_; }

    /// Canonical order: by order, then lexicographic basis.
    bool operator<(const Subgroup& o) const {
        if (order() != o.order()) return order() < o.order();
        return basis_ < o.basis_;
    }

  private:
    std::size_t width_;
    std::vector<BitVec> basis_;  // RREF rows, pivot order
};

/// All subgroups of (Z/2)^w in canonical order. Widths above 2 are out of
/// scope for this toolkit and rejected.
inline std::vector<Subgroup> subgroups(std::size_t w) {
    if (w > 2) throw std::invalid_argument("subgroups: width > 2 unsupported");
    const std::size_t q = static_cast<std::size_t>(1) << w;
    std::vector<Subgroup> out;
    for (std::uint32_t mask = 0; mask < (1u << q); ++mask) {
        if (!(mask & 1u)) continue;  // must contain 0
        bool closed = true;
        for (std::size_t x = 0; x < q && closed; ++x)
            for (std::size_t y = 0; y < q && closed; ++y)
                if (((mask >> x) & 1u) && ((mask >> y) & 1u) && !((mask >> (x ^ y)) & 1u)) closed = false;
        if (!closed) continue;
        std::vector<BitVec> gens;
        for (std::size_t x = 1; x < q; ++x)
            if ((mask >> x) & 1u) gens.push_back(BitVec::from_symbol(static_cast<unsigned>(x), w));
        out.push_back(Subgroup::from_generators(w, gens));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Ambiguity subgroup of one symbol slot: {x_range - x'_range : x, x' in sol}.
inline Subgroup project_solution_subgroup(const AffineSet& sol, std::size_t start, std::size_t width) {
    if (start + width > sol.particular.size())
        throw std::invalid_argument("project_solution_subgroup: range out of bounds");
    std::vector<BitVec> gens;
    gens.reserve(sol.kernel.size());
    for (const auto& k : sol.kernel) gens.push_back(k.slice(start, width));
    return Subgroup::from_generators(width, gens);
}

inline Subgroup project_solution_subgroup(const std::optional<AffineSet>& sol, std::size_t start,
                                          std::size_t width) {
    if (!sol) throw std::invalid_argument("project_solution_subgroup: empty solution set");
    return project_solution_subgroup(*sol, start, width);
}

}  // namespace mixedpolar
