// Dense complex vector/matrix algebra over small rail spaces.
//
// Everything here is exact double-precision linear algebra; dimensions are
// the number of interferometer rails (a handful), so no attempt is made at
// sparse storage or blocked kernels. Values are immutable after
// construction and all operations are pure functions.

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qpath {

using Complex = std::complex<double>;

// Entrywise tolerance for exact-algebra assertions. Entry magnitudes are
// <= 1 and dimensions are tiny, so double rounding sits orders below this.
inline constexpr double kAlgebraTol = 1e-12;

// Complex amplitude assignment over the rails, optionally tagged with the
// circuit stage the representation belongs to.
class StateVector {
  public:
    explicit StateVector(std::size_t dim);
    StateVector(std::vector<Complex> amps, std::string stage_tag = {});

    // e_index, tagged with stage_tag.
    static StateVector basis(std::size_t dim, std::size_t index,
                             std::string stage_tag = {});

    std::size_t dim() const { return amps_.size(); }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<Complex>& amps() const { return amps_; }

    const std::string& stage_tag() const { return stage_tag_; }
    bool has_stage_tag() const { return !stage_tag_.empty(); }
    StateVector with_stage_tag(std::string tag) const;

    double norm2() const;
    bool is_normalized(double tol = kAlgebraTol) const;
    StateVector normalized() const;

  private:
    std::vector<Complex> amps_;
    std::string stage_tag_;
};

// Square complex matrix; rows index output rails, columns input rails.
class Operator {
  public:
    explicit Operator(std::size_t dim);  // zero matrix
    Operator(std::size_t dim, std::vector<Complex> entries);  // row-major

    static Operator identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const Complex& at(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }
    void set(std::size_t row, std::size_t col, Complex v);
    const std::vector<Complex>& entries() const { return entries_; }

    bool is_unitary(double tol = kAlgebraTol) const;

  private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

// <bra|ket> = sum_i conj(bra_i) ket_i.
Complex inner(const StateVector& bra, const StateVector& ket);

// |ket><bra|, entries[i][j] = ket_i * conj(bra_j).
Operator outer(const StateVector& ket, const StateVector& bra);

StateVector apply(const Operator& op, const StateVector& v);

// compose(a, b): apply b first, then a.
Operator compose(const Operator& a, const Operator& b);

Operator adjoint(const Operator& op);

Complex trace(const Operator& op);

// Entrywise helpers used throughout the analysis layer.
Operator add(const Operator& a, const Operator& b);
Operator subtract(const Operator& a, const Operator& b);
Operator scale(Complex factor, const Operator& a);
double max_abs_entry(const Operator& a);

}  // namespace qpath
