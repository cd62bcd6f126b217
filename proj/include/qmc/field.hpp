#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qmc/errors.hpp"

namespace qmc {

bool is_prime(std::uint32_t n);

// Throws DomainError unless 2 <= b < 2^16 and b is prime.
void require_prime_base(std::uint32_t b);

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t b);

// Residue in {0,...,b-1} tagged with its prime base b. Arithmetic between
// elements of different bases is a UsageError rather than a wrong answer.
class FieldElement {
  public:
    FieldElement(std::uint64_t value, std::uint32_t base);

    std::uint32_t value() const { return value_; }
    std::uint32_t base() const { return base_; }

    friend FieldElement operator+(FieldElement a, FieldElement b);
    friend FieldElement operator-(FieldElement a, FieldElement b);
    friend FieldElement operator*(FieldElement a, FieldElement b);
    friend bool operator==(FieldElement a, FieldElement b) = default;

  private:
    std::uint32_t value_;
    std::uint32_t base_;
};

// Multiplicative inverse; DomainError on zero.
FieldElement inverse(FieldElement a);

// Dense matrix over F_b, row-major. A FieldMatrix is the stored truncation of
// a conceptually infinite matrix whose unstored entries are zero, so reads
// beyond the stored extent return 0 and upper_left() may extend with zeros.
class FieldMatrix {
  public:
    FieldMatrix(std::uint32_t base, std::size_t rows, std::size_t cols);

    static FieldMatrix identity(std::uint32_t base, std::size_t m);

    std::uint32_t base() const { return base_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint32_t at(std::size_t r, std::size_t c) const {
        return (r < rows_ && c < cols_) ? a_[r * cols_ + c] : 0u;
    }
    void set(std::size_t r, std::size_t c, std::uint32_t v);

    // The left upper m x m submatrix C(m), zero-filled past the stored extent.
    FieldMatrix upper_left(std::size_t m) const;

    FieldMatrix transpose() const;

    // Exact product over F_b; v may be shorter than cols() (zero-padded),
    // longer is a UsageError. Result has length rows().
    std::vector<std::uint32_t> mat_vec(std::span<const std::uint32_t> v) const;

    // Row rank over F_b by exact Gaussian elimination.
    std::size_t rank() const;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

  private:
    std::uint32_t base_;
    std::size_t rows_, cols_;
    std::vector<std::uint32_t> a_;
};

// Rank of an explicit list of rows (all of length cols) over F_b. Used for the
// stacked row-prefix condition of net analysis.
std::size_t rank_of_rows(std::vector<std::vector<std::uint32_t>> rows,
                         std::size_t cols, std::uint32_t base);

// Text format: header "base=<b> rows=<R> cols=<L>", then R lines of L
// space-separated digits. Round-trips bit-exactly.
std::string to_text(const FieldMatrix& m);
FieldMatrix matrix_from_text(std::istream& in);
std::vector<FieldMatrix> matrices_from_text(std::istream& in);
std::vector<FieldMatrix> matrices_from_file(const std::string& path);
void matrices_to_file(const std::string& path, const std::vector<FieldMatrix>& ms);

} // namespace qmc
