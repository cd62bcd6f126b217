#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmc/field.hpp"
#include "qmc/parallel.hpp"

namespace qmc {

// b^e, PrecisionError if it does not fit in 63 bits.
std::uint64_t checked_pow(std::uint32_t b, int e);

// Base-b digits of n, little-endian, trailing zeros trimmed; digits(0) = ().
std::vector<std::uint32_t> digits(std::uint64_t n, std::uint32_t base);

// One s-dimensional point with coordinate j stored exactly as num[j] / b^digits.
struct DigitalPoint {
    std::uint32_t base = 0;
    int digits = 0;
    std::vector<std::uint64_t> num;

    int dim() const { return static_cast<int>(num.size()); }
    double value(int j) const;
};

// Ordered point list with exact per-coordinate rational coordinates
// num / denom[j]. Digital sets share denom[j] = base^precision for all j;
// Halton sets carry mixed denominators (base() == 0 then).
class PointSet {
  public:
    PointSet(int dim, std::vector<std::uint64_t> denoms, std::string provenance = "");

    // uniform-denominator digital set
    PointSet(int dim, std::uint32_t base, int precision, std::string provenance = "");

    int dim() const { return dim_; }
    std::size_t size() const { return num_.size() / dim_; }
    std::uint64_t num(std::size_t n, int j) const { return num_[n * dim_ + j]; }
    std::uint64_t denom(int j) const { return denom_[j]; }
    double value(std::size_t n, int j) const {
        return static_cast<double>(num_[n * dim_ + j]) / static_cast<double>(denom_[j]);
    }

    // base/precision of the shared denominator; base() == 0 for mixed sets
    std::uint32_t base() const { return base_; }
    int precision() const { return prec_; }

    const std::string& provenance() const { return provenance_; }

    void append(std::span<const std::uint64_t> nums);
    void append(const DigitalPoint& p);

    PointSet prefix(std::size_t n) const;
    PointSet project(const std::vector<int>& coords) const;

  private:
    int dim_;
    std::vector<std::uint64_t> denom_;
    std::vector<std::uint64_t> num_;
    std::uint32_t base_ = 0;
    int prec_ = 0;
    std::string provenance_;
};

// Generating matrices C_1,...,C_s over F_b, each out_digits x in_digits:
// point n is defined for n < b^in_digits and carries out_digits digits.
// Square m x m sets have in_digits == out_digits == m; order-2 interlaced
// sets have out_digits == 2 * in_digits.
class GeneratorSet {
  public:
    GeneratorSet(std::vector<FieldMatrix> matrices, std::string provenance = "");

    std::uint32_t base() const { return base_; }
    int dim() const { return static_cast<int>(matrices_.size()); }
    int in_digits() const { return in_digits_; }
    int out_digits() const { return out_digits_; }
    const FieldMatrix& matrix(int j) const { return matrices_[j]; }
    const std::string& provenance() const { return provenance_; }

    std::uint64_t max_index() const; // b^in_digits

    // x_n: digit vector of n through each C_j; PrecisionError if n >= b^in_digits.
    DigitalPoint point(std::uint64_t n) const;

    // Points 0..count-1, parallelizable over n.
    PointSet prefix(std::uint64_t count, Exec exec = Exec::parallel) const;
    // Points first..first+count-1 (aligned blocks for net scans).
    PointSet block(std::uint64_t first, std::uint64_t count, Exec exec = Exec::parallel) const;

  private:
    std::vector<FieldMatrix> matrices_;
    std::uint32_t base_;
    int in_digits_, out_digits_;
    std::string provenance_;
};

// Named constructions: "vdc" (s = 1 identity), "identity", "umatrix"
// (upper-triangular all ones), "faure" (Pascal-matrix powers, prime b >= s),
// "random" (seeded i.i.d. uniform digits).
GeneratorSet preset(const std::string& name, int s, std::uint32_t b, int m,
                    std::uint64_t seed = 0);

// binomial(n, k) mod b
std::uint32_t binomial_mod(std::uint32_t n, std::uint32_t k, std::uint32_t b);

// Truncated formal Laurent series sum_{i >= start} coeff[i-start] * t^-i over F_b.
// Exponents below `start` and above start+len-1 are outside the truncation.
struct LaurentSeries {
    std::uint32_t base = 2;
    int start = 1;
    std::vector<std::uint32_t> coeff;

    int last_exponent() const { return start + static_cast<int>(coeff.size()) - 1; }
    // Coefficient g_e of t^-e; zero for e < start, PrecisionError past the truncation.
    std::uint32_t coefficient(int e) const;
};

// Hankel generating matrices C_j(k,l) = coefficient of t^-(k+l-1) in f_j;
// requires each series to cover exponents 1..2m-1.
GeneratorSet kronecker_matrices(const std::vector<LaurentSeries>& f, int m);

// {t^n f}|_{t=b} truncated to m digits; the shifted-subsequence variant used
// by the metrical recipes. Needs coefficients up to exponent n + m.
DigitalPoint kronecker_shift_point(const std::vector<LaurentSeries>& f,
                                   std::uint64_t n, int m);

// Order-2 interlacing: 2s input matrices (rows >= m, cols >= m) produce s
// matrices of shape 2m x m whose row 2u+v is row u+1 of input 2(j-1)+v.
std::vector<FieldMatrix> interlace2(const std::vector<FieldMatrix>& c, int m);

// Convenience: interlaced GeneratorSet straight from the matrices.
GeneratorSet interlaced_generator(const std::vector<FieldMatrix>& c, int m,
                                  std::string provenance = "interlace2");

// Radical inverse of n in base b truncated to m digits, over denominator b^m.
std::uint64_t radical_inverse_num(std::uint64_t n, std::uint32_t b, int m);

// Halton point: coordinate j is the radical inverse of n in bases[j]; the
// bases must be pairwise coprime and >= 2 (DomainError otherwise).
std::vector<std::uint64_t> halton_point(std::uint64_t n, std::span<const std::uint32_t> bases, int m);
PointSet halton_prefix(std::uint64_t count, std::span<const std::uint32_t> bases, int m,
                       Exec exec = Exec::parallel);

// Point-set CSV: header "# base=<b> dim=<s> prec=<m> N=<N>", one row per
// point; fractions "a/b^m" by default, >= 17-significant-digit decimals
// when decimals = true. Round-trips exactly in fraction mode.
std::string pointset_to_csv(const PointSet& p, bool decimals = false);
PointSet pointset_from_csv(std::istream& in);

} // namespace qmc
