#include "qmc/field.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace qmc {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

void require_prime_base(std::uint32_t b) {
    if (b < 2 || b >= (1u << 16) || !is_prime(b))
        throw DomainError("base must be a prime < 2^16, got " + std::to_string(b));
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t b) {
    if (a % b == 0) throw DomainError("inverse of zero in F_" + std::to_string(b));
    // extended Euclid on (a, b); b prime so gcd = 1
    std::int64_t r0 = a % b, r1 = b, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    std::int64_t inv = s0 % b;
    if (inv < 0) inv += b;
    return static_cast<std::uint32_t>(inv);
}

FieldElement::FieldElement(std::uint64_t value, std::uint32_t base) : base_(base) {
    require_prime_base(base);
    value_ = static_cast<std::uint32_t>(value % base);
}

namespace {
void require_same_base(FieldElement a, FieldElement b) {
    if (a.base() != b.base())
        throw UsageError("field elements have different bases: " +
                         std::to_string(a.base()) + " vs " + std::to_string(b.base()));
}
} // namespace

FieldElement operator+(FieldElement a, FieldElement b) {
    require_same_base(a, b);
    return FieldElement((std::uint64_t)a.value_ + b.value_, a.base_);
}

FieldElement operator-(FieldElement a, FieldElement b) {
    require_same_base(a, b);
    return FieldElement((std::uint64_t)a.value_ + a.base_ - b.value_, a.base_);
}

FieldElement operator*(FieldElement a, FieldElement b) {
    require_same_base(a, b);
    return FieldElement((std::uint64_t)a.value_ * b.value_, a.base_);
}

FieldElement inverse(FieldElement a) {
    return FieldElement(mod_inverse(a.value(), a.base()), a.base());
}

FieldMatrix::FieldMatrix(std::uint32_t base, std::size_t rows, std::size_t cols)
    : base_(base), rows_(rows), cols_(cols), a_(rows * cols, 0u) {
    require_prime_base(base);
    if (rows == 0 || cols == 0) throw UsageError("matrix dimensions must be positive");
}

FieldMatrix FieldMatrix::identity(std::uint32_t base, std::size_t m) {
    FieldMatrix r(base, m, m);
    for (std::size_t i = 0; i < m; ++i) r.a_[i * m + i] = 1u;
    return r;
}

void FieldMatrix::set(std::size_t r, std::size_t c, std::uint32_t v) {
    if (r >= rows_ || c >= cols_) throw UsageError("matrix index out of range");
    a_[r * cols_ + c] = v % base_;
}

FieldMatrix FieldMatrix::upper_left(std::size_t m) const {
    if (m == 0) throw UsageError("submatrix size must be >= 1");
    FieldMatrix r(base_, m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            r.a_[i * m + j] = at(i, j);
    return r;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix r(base_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r.a_[j * rows_ + i] = a_[i * cols_ + j];
    return r;
}

std::vector<std::uint32_t> FieldMatrix::mat_vec(std::span<const std::uint32_t> v) const {
    if (v.size() > cols_)
        throw UsageError("vector longer than matrix column count");
    std::vector<std::uint32_t> y(rows_, 0u);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::uint64_t acc = 0;
        const std::uint32_t* row = &a_[i * cols_];
        for (std::size_t j = 0; j < v.size(); ++j) acc += (std::uint64_t)row[j] * v[j];
        y[i] = static_cast<std::uint32_t>(acc % base_);
    }
    return y;
}

namespace {

// In-place elimination; returns the rank. Rows of length `cols` over F_b.
std::size_t eliminate(std::vector<std::vector<std::uint32_t>>& rows,
                      std::size_t cols, std::uint32_t b) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const std::uint64_t inv = mod_inverse(rows[rank][col], b);
        for (std::size_t j = col; j < cols; ++j)
            rows[rank][j] = static_cast<std::uint32_t>(rows[rank][j] * inv % b);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            const std::uint64_t f = rows[i][col];
            for (std::size_t j = col; j < cols; ++j) {
                std::uint64_t v = rows[i][j] + (b - 1ull) * b; // keep subtraction nonnegative
                v -= f * rows[rank][j] % b;
                rows[i][j] = static_cast<std::uint32_t>(v % b);
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace

std::size_t FieldMatrix::rank() const {
    std::vector<std::vector<std::uint32_t>> rows(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        rows[i].assign(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    return eliminate(rows, cols_, base_);
}

std::size_t rank_of_rows(std::vector<std::vector<std::uint32_t>> rows,
                         std::size_t cols, std::uint32_t base) {
    for (const auto& r : rows)
        if (r.size() != cols) throw UsageError("row length mismatch in rank_of_rows");
    return eliminate(rows, cols, base);
}

std::string to_text(const FieldMatrix& m) {
    std::ostringstream os;
    os << "base=" << m.base() << " rows=" << m.rows() << " cols=" << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m.at(i, j);
        }
        os << "\n";
    }
    return os.str();
}

FieldMatrix matrix_from_text(std::istream& in) {
    std::string line;
    do {
        if (!std::getline(in, line)) throw UsageError("matrix text: missing header");
    } while (line.find_first_not_of(" \t\r") == std::string::npos);

    std::uint32_t b = 0;
    std::size_t r = 0, c = 0;
    {
        std::istringstream hs(line);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("base=", 0) == 0) b = std::stoul(tok.substr(5));
            else if (tok.rfind("rows=", 0) == 0) r = std::stoull(tok.substr(5));
            else if (tok.rfind("cols=", 0) == 0) c = std::stoull(tok.substr(5));
            else throw UsageError("matrix text: unexpected header token '" + tok + "'");
        }
    }
    if (b == 0 || r == 0 || c == 0)
        throw UsageError("matrix text: header must set base=, rows=, cols=");
    FieldMatrix m(b, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!std::getline(in, line)) throw UsageError("matrix text: truncated rows");
        std::istringstream rs(line);
        for (std::size_t j = 0; j < c; ++j) {
            std::uint64_t v;
            if (!(rs >> v)) throw UsageError("matrix text: short row");
            if (v >= b) throw UsageError("matrix text: digit >= base");
            m.set(i, j, static_cast<std::uint32_t>(v));
        }
        std::uint64_t extra;
        if (rs >> extra) throw UsageError("matrix text: long row");
    }
    return m;
}

std::vector<FieldMatrix> matrices_from_text(std::istream& in) {
    std::vector<FieldMatrix> out;
    while (true) {
        // peek for another header
        std::streampos pos = in.tellg();
        std::string line;
        bool found = false;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) { found = true; break; }
            pos = in.tellg();
        }
        if (!found) break;
        in.clear();
        in.seekg(pos);
        out.push_back(matrix_from_text(in));
    }
    if (out.empty()) throw UsageError("matrix text: no matrices found");
    return out;
}

std::vector<FieldMatrix> matrices_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open matrix file: " + path);
    return matrices_from_text(in);
}

void matrices_to_file(const std::string& path, const std::vector<FieldMatrix>& ms) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write matrix file: " + path);
    for (const auto& m : ms) out << to_text(m) << "\n";
}

} // namespace qmc
