#include "qpath/algebra.hpp"

#include <cmath>
#include <utility>

#include "qpath/errors.hpp"

namespace qpath {

namespace {

void require_finite(const std::vector<Complex>& values, const char* what) {
    for (const Complex& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NonFiniteValue(std::string(what) +
                                 " contains a non-finite amplitude");
        }
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimensions " +
                                std::to_string(a) + " and " +
                                std::to_string(b) + " differ");
    }
}

}  // namespace

StateVector::StateVector(std::size_t dim) : amps_(dim) {
    if (dim == 0) throw DimensionMismatch("StateVector: dimension must be positive");
}

StateVector::StateVector(std::vector<Complex> amps, std::string stage_tag)
    : amps_(std::move(amps)), stage_tag_(std::move(stage_tag)) {
    if (amps_.empty()) throw DimensionMismatch("StateVector: dimension must be positive");
    require_finite(amps_, "StateVector");
}

StateVector StateVector::basis(std::size_t dim, std::size_t index,
                               std::string stage_tag) {
    if (index >= dim) {
        throw DimensionMismatch("StateVector::basis: index " +
                                std::to_string(index) + " out of range for dim " +
                                std::to_string(dim));
    }
    StateVector v(dim);
    v.amps_[index] = Complex{1.0, 0.0};
    v.stage_tag_ = std::move(stage_tag);
    return v;
}

StateVector StateVector::with_stage_tag(std::string tag) const {
    StateVector v = *this;
    v.stage_tag_ = std::move(tag);
    return v;
}

double StateVector::norm2() const {
    double n = 0.0;
    for (const Complex& a : amps_) n += std::norm(a);
    return n;
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm2() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = std::sqrt(norm2());
    if (!(n > 0.0)) throw NonFiniteValue("StateVector::normalized: zero vector");
    std::vector<Complex> amps(amps_);
    for (Complex& a : amps) a /= n;
    return StateVector(std::move(amps), stage_tag_);
}

Operator::Operator(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw DimensionMismatch("Operator: dimension must be positive");
}

Operator::Operator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) throw DimensionMismatch("Operator: dimension must be positive");
    if (entries_.size() != dim * dim) {
        throw DimensionMismatch("Operator: entry count " +
                                std::to_string(entries_.size()) +
                                " does not match dim " + std::to_string(dim));
    }
    require_finite(entries_, "Operator");
}

Operator Operator::identity(std::size_t dim) {
    Operator op(dim);
    for (std::size_t i = 0; i < dim; ++i) op.set(i, i, Complex{1.0, 0.0});
    return op;
}

void Operator::set(std::size_t row, std::size_t col, Complex v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NonFiniteValue("Operator::set: non-finite entry");
    }
    entries_[row * dim_ + col] = v;
}

bool Operator::is_unitary(double tol) const {
    const Operator self_adjoint_product = compose(adjoint(*this), *this);
    const Operator residual =
        subtract(self_adjoint_product, Operator::identity(dim_));
    return max_abs_entry(residual) <= tol;
}

Complex inner(const StateVector& bra, const StateVector& ket) {
    require_same_dim(bra.dim(), ket.dim(), "inner");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < bra.dim(); ++i) {
        acc += std::conj(bra[i]) * ket[i];
    }
    return acc;
}

Operator outer(const StateVector& ket, const StateVector& bra) {
    require_same_dim(ket.dim(), bra.dim(), "outer");
    Operator op(ket.dim());
    for (std::size_t i = 0; i < ket.dim(); ++i) {
        for (std::size_t j = 0; j < bra.dim(); ++j) {
            op.set(i, j, ket[i] * std::conj(bra[j]));
        }
    }
    return op;
}

StateVector apply(const Operator& op, const StateVector& v) {
    require_same_dim(op.dim(), v.dim(), "apply");
    std::vector<Complex> out(v.dim(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < op.dim(); ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < op.dim(); ++j) {
            acc += op.at(i, j) * v[j];
        }
        out[i] = acc;
    }
    return StateVector(std::move(out), v.stage_tag());
}

Operator compose(const Operator& a, const Operator& b) {
    require_same_dim(a.dim(), b.dim(), "compose");
    const std::size_t n = a.dim();
    Operator out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k) {
                acc += a.at(i, k) * b.at(k, j);
            }
            out.set(i, j, acc);
        }
    }
    return out;
}

Operator adjoint(const Operator& op) {
    const std::size_t n = op.dim();
    Operator out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.set(i, j, std::conj(op.at(j, i)));
        }
    }
    return out;
}

Complex trace(const Operator& op) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < op.dim(); ++i) acc += op.at(i, i);
    return acc;
}

Operator add(const Operator& a, const Operator& b) {
    require_same_dim(a.dim(), b.dim(), "add");
    const std::size_t n = a.dim();
    Operator out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.set(i, j, a.at(i, j) + b.at(i, j));
        }
    }
    return out;
}

Operator subtract(const Operator& a, const Operator& b) {
    require_same_dim(a.dim(), b.dim(), "subtract");
    const std::size_t n = a.dim();
    Operator out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.set(i, j, a.at(i, j) - b.at(i, j));
        }
    }
    return out;
}

Operator scale(Complex factor, const Operator& a) {
    const std::size_t n = a.dim();
    Operator out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.set(i, j, factor * a.at(i, j));
        }
    }
    return out;
}

double max_abs_entry(const Operator& a) {
    double m = 0.0;
    for (const Complex& v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace qpath
