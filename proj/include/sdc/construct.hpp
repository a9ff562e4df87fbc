#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "code.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "provenance.hpp"

namespace sdc {

/// A square matrix A with A A^T = -I. By the systematic-form criterion, (I | A) then generates
/// a self-dual code, and the set of such A is a coset of the orthogonal group.
class NegOrthogonalWitness {
  public:
    NegOrthogonalWitness(FqMatrix a, Provenance provenance) : a_(std::move(a)), provenance_(std::move(provenance)) {
        if (!a_.is_square() || !is_neg_orthogonal(a_))
            throw internal_error("construction produced a matrix with A A^T != -I");
    }

    const FqMatrix& matrix() const noexcept { return a_; }
    const Provenance& provenance() const noexcept { return provenance_; }
    Provenance& provenance() noexcept { return provenance_; }
    std::size_t size() const noexcept { return a_.rows(); }

  private:
    FqMatrix a_;
    Provenance provenance_;
};

using SquarePair = std::pair<elem_t, elem_t>;

namespace detail {

inline void require_orthogonal(const FqMatrix& l, const char* who) {
    if (!l.is_square() || !is_orthogonal(l)) throw invalid_argument(std::string(who) + ": L is not orthogonal");
}

inline SquarePair checked_pair(const PrimeField& f, std::optional<SquarePair> ab) {
    auto p = ab ? *ab : two_squares_minus_one(f);
    const elem_t s = f.add(f.mul(p.first % f.q(), p.first % f.q()), f.mul(p.second % f.q(), p.second % f.q()));
    if (s != f.q() - 1) throw invalid_argument("(alpha, beta) does not satisfy alpha^2 + beta^2 = -1");
    return {p.first % f.q(), p.second % f.q()};
}

/// D_0 = [[alpha, beta], [-beta, alpha]].
inline FqMatrix d0_block(const PrimeField& f, SquarePair ab) {
    return FqMatrix::from_rows(f, {{ab.first, ab.second}, {-static_cast<std::int64_t>(ab.second), ab.first}});
}

}  // namespace detail

/// The self-dual code generated by (I | A).
inline LinearCode from_witness(const NegOrthogonalWitness& w) {
    const auto& a = w.matrix();
    LinearCode c(hstack(FqMatrix::identity(a.field(), a.rows()), a));
    if (!is_self_dual(c)) throw internal_error("(I | A) is not self-dual although A A^T = -I");
    return c;
}

/// A = alpha L with alpha^2 = -1. Needs q = 1 (mod 4).
inline NegOrthogonalWitness build_eq1(const FqMatrix& l, std::optional<elem_t> alpha = std::nullopt) {
    const auto& f = l.field();
    if (f.q() % 4 != 1) throw invalid_argument("eq1 needs q = 1 (mod 4)");
    detail::require_orthogonal(l, "eq1");
    const elem_t a = alpha ? *alpha % f.q() : sqrt_minus_one(f);
    if (f.mul(a, a) != f.q() - 1) throw invalid_argument("eq1: alpha^2 != -1");
    Provenance p;
    p.set("construction", "eq1");
    p.set("alpha", a);
    return NegOrthogonalWitness(l.scaled(a), std::move(p));
}

/// A = D L with D = diag(D_0, ..., D_0), L of even size. Any odd q.
inline NegOrthogonalWitness build_eq2(const FqMatrix& l, std::optional<SquarePair> alpha_beta = std::nullopt) {
    const auto& f = l.field();
    if (!f.is_odd()) throw invalid_argument("eq2 needs an odd prime");
    detail::require_orthogonal(l, "eq2");
    if (l.rows() % 2) throw invalid_argument("eq2 needs L of even size");
    const auto ab = detail::checked_pair(f, alpha_beta);
    std::vector<FqMatrix> blocks(l.rows() / 2, detail::d0_block(f, ab));
    Provenance p;
    p.set("construction", "eq2");
    p.set("alpha", ab.first);
    p.set("beta", ab.second);
    return NegOrthogonalWitness(block_diagonal(blocks) * l, std::move(p));
}

/// A = [[alpha L, beta L], [-beta L^T, alpha L^T]] for L of any size n; A is 2n x 2n. Any odd q.
inline NegOrthogonalWitness build_eq3(const FqMatrix& l, std::optional<SquarePair> alpha_beta = std::nullopt) {
    const auto& f = l.field();
    if (!f.is_odd()) throw invalid_argument("eq3 needs an odd prime");
    detail::require_orthogonal(l, "eq3");
    const auto ab = detail::checked_pair(f, alpha_beta);
    const std::size_t n = l.rows();
    const auto lt = l.transpose();
    FqMatrix a(f, 2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = f.mul(ab.first, l(i, j));
            a(i, n + j) = f.mul(ab.second, l(i, j));
            a(n + i, j) = f.neg(f.mul(ab.second, lt(i, j)));
            a(n + i, n + j) = f.mul(ab.first, lt(i, j));
        }
    Provenance p;
    p.set("construction", "eq3");
    p.set("alpha", ab.first);
    p.set("beta", ab.second);
    return NegOrthogonalWitness(std::move(a), std::move(p));
}

/// A' = A L_1 ... L_r. Stays in the coset, so (I | A') is again self-dual.
inline NegOrthogonalWitness diffuse_eq4(const NegOrthogonalWitness& w, const std::vector<FqMatrix>& ls) {
    FqMatrix a = w.matrix();
    for (const auto& l : ls) {
        if (l.rows() != a.rows()) throw invalid_argument("eq4: diffusion matrix size does not match the witness");
        detail::require_orthogonal(l, "eq4");
        a = a * l;
    }
    Provenance p = w.provenance();
    const auto prior = p.get("diffusion_factors");
    p.set("diffusion_factors", std::to_string((prior ? std::stoul(*prior) : 0) + ls.size()));
    return NegOrthogonalWitness(std::move(a), std::move(p));
}

}  // namespace sdc
