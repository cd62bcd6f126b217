#include "qmc/sequence.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>

namespace qmc {

std::uint64_t checked_pow(std::uint32_t b, int e) {
    if (e < 0) throw UsageError("negative exponent");
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > ((1ull << 63) - 1) / b)
            throw PrecisionError("b^m exceeds 63 bits: " + std::to_string(b) + "^" +
                                 std::to_string(e));
        r *= b;
    }
    return r;
}

std::vector<std::uint32_t> digits(std::uint64_t n, std::uint32_t base) {
    require_prime_base(base);
    std::vector<std::uint32_t> d;
    while (n) {
        d.push_back(static_cast<std::uint32_t>(n % base));
        n /= base;
    }
    return d;
}

double DigitalPoint::value(int j) const {
    return static_cast<double>(num[j]) / static_cast<double>(checked_pow(base, digits));
}

PointSet::PointSet(int dim, std::vector<std::uint64_t> denoms, std::string provenance)
    : dim_(dim), denom_(std::move(denoms)), provenance_(std::move(provenance)) {
    if (dim < 1 || denom_.size() != static_cast<std::size_t>(dim))
        throw UsageError("point set: dimension / denominator mismatch");
    for (auto d : denom_)
        if (d == 0) throw UsageError("point set: zero denominator");
}

PointSet::PointSet(int dim, std::uint32_t base, int precision, std::string provenance)
    : PointSet(dim, std::vector<std::uint64_t>(dim, checked_pow(base, precision)),
               std::move(provenance)) {
    require_prime_base(base);
    base_ = base;
    prec_ = precision;
}

void PointSet::append(std::span<const std::uint64_t> nums) {
    if (nums.size() != static_cast<std::size_t>(dim_))
        throw UsageError("point set: appending point of wrong dimension");
    for (int j = 0; j < dim_; ++j)
        if (nums[j] >= denom_[j]) throw UsageError("point set: coordinate >= 1");
    num_.insert(num_.end(), nums.begin(), nums.end());
}

void PointSet::append(const DigitalPoint& p) {
    if (base_ == 0 || p.base != base_ || p.digits != prec_)
        throw UsageError("point set: digital point has different base/precision");
    append(std::span<const std::uint64_t>(p.num));
}

PointSet PointSet::prefix(std::size_t n) const {
    if (n > size()) throw UsageError("prefix longer than point set");
    PointSet r(dim_, denom_, provenance_);
    r.base_ = base_;
    r.prec_ = prec_;
    r.num_.assign(num_.begin(), num_.begin() + n * dim_);
    return r;
}

PointSet PointSet::project(const std::vector<int>& coords) const {
    if (coords.empty()) throw UsageError("projection needs at least one coordinate");
    std::vector<std::uint64_t> d;
    for (int j : coords) {
        if (j < 0 || j >= dim_) throw UsageError("projection coordinate out of range");
        d.push_back(denom_[j]);
    }
    PointSet r(static_cast<int>(coords.size()), std::move(d), provenance_);
    if (base_ != 0) {
        r.base_ = base_;
        r.prec_ = prec_;
    }
    const std::size_t n = size();
    r.num_.reserve(n * coords.size());
    for (std::size_t i = 0; i < n; ++i)
        for (int j : coords) r.num_.push_back(num(i, j));
    return r;
}

GeneratorSet::GeneratorSet(std::vector<FieldMatrix> matrices, std::string provenance)
    : matrices_(std::move(matrices)), provenance_(std::move(provenance)) {
    if (matrices_.empty()) throw UsageError("generator set needs at least one matrix");
    base_ = matrices_[0].base();
    out_digits_ = static_cast<int>(matrices_[0].rows());
    in_digits_ = static_cast<int>(matrices_[0].cols());
    for (const auto& m : matrices_) {
        if (m.base() != base_) throw UsageError("generator matrices have mixed bases");
        if (static_cast<int>(m.rows()) != out_digits_ ||
            static_cast<int>(m.cols()) != in_digits_)
            throw UsageError("generator matrices have mixed shapes");
    }
    checked_pow(base_, out_digits_); // numerators must fit
}

std::uint64_t GeneratorSet::max_index() const { return checked_pow(base_, in_digits_); }

DigitalPoint GeneratorSet::point(std::uint64_t n) const {
    const auto d = digits(n, base_);
    if (d.size() > static_cast<std::size_t>(in_digits_))
        throw PrecisionError("index " + std::to_string(n) + " needs " +
                             std::to_string(d.size()) + " digits, generator stores " +
                             std::to_string(in_digits_));
    DigitalPoint p;
    p.base = base_;
    p.digits = out_digits_;
    p.num.reserve(matrices_.size());
    for (const auto& c : matrices_) {
        const auto y = c.mat_vec(d);
        std::uint64_t num = 0;
        for (int k = 0; k < out_digits_; ++k) num = num * base_ + y[k];
        p.num.push_back(num);
    }
    return p;
}

PointSet GeneratorSet::prefix(std::uint64_t count, Exec exec) const {
    return block(0, count, exec);
}

PointSet GeneratorSet::block(std::uint64_t first, std::uint64_t count, Exec exec) const {
    if (count > 0 && first + count - 1 >= max_index())
        throw PrecisionError("block end exceeds b^in_digits");
    const int s = dim();
    std::vector<std::uint64_t> nums(count * s);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            const auto p = point(first + i);
            for (int j = 0; j < s; ++j) nums[i * s + j] = p.num[j];
        }
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto p = point(first + i);
            for (int j = 0; j < s; ++j) nums[i * s + j] = p.num[j];
        }
    }
    PointSet ps(s, base_, out_digits_, provenance_);
    for (std::uint64_t i = 0; i < count; ++i)
        ps.append(std::span<const std::uint64_t>(nums.data() + i * s, s));
    return ps;
}

std::uint32_t binomial_mod(std::uint32_t n, std::uint32_t k, std::uint32_t b) {
    if (k > n) return 0;
    // Pascal triangle mod b; n stays small (matrix precision)
    std::vector<std::uint32_t> row(n + 1, 0);
    row[0] = 1;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = i; j > 0; --j) row[j] = (row[j] + row[j - 1]) % b;
    return row[k];
}

namespace {

std::uint32_t uniform_digit(std::mt19937_64& rng, std::uint32_t b) {
    // rejection keeps the draw exactly uniform and platform-independent
    const std::uint64_t lim = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t r;
    do { r = rng(); } while (r >= lim);
    return static_cast<std::uint32_t>(r % b);
}

FieldMatrix faure_matrix(std::uint32_t b, int m, std::uint32_t j) {
    // C_j = P^(j-1): entry (k,l) = binom(l-1, k-1) (j-1)^(l-k) mod b, 0^0 = 1
    FieldMatrix c(b, m, m);
    std::vector<std::vector<std::uint32_t>> binom(m, std::vector<std::uint32_t>(m, 0));
    for (int n = 0; n < m; ++n) {
        binom[n][0] = 1;
        for (int k = 1; k <= n; ++k)
            binom[n][k] = (binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0)) % b;
    }
    const std::uint32_t q = (j - 1) % b;
    std::vector<std::uint32_t> qpow(m, 1);
    for (int e = 1; e < m; ++e) qpow[e] = static_cast<std::uint32_t>((std::uint64_t)qpow[e - 1] * q % b);
    for (int k = 1; k <= m; ++k)
        for (int l = k; l <= m; ++l) {
            const std::uint32_t v = (l == k) ? binom[l - 1][k - 1]
                : static_cast<std::uint32_t>((std::uint64_t)binom[l - 1][k - 1] * qpow[l - k] % b);
            c.set(k - 1, l - 1, v);
        }
    return c;
}

} // namespace

GeneratorSet preset(const std::string& name, int s, std::uint32_t b, int m,
                    std::uint64_t seed) {
    require_prime_base(b);
    if (s < 1 || m < 1) throw UsageError("preset needs s >= 1 and m >= 1");
    std::vector<FieldMatrix> ms;
    if (name == "vdc") {
        if (s != 1) throw UsageError("vdc preset is one-dimensional");
        ms.push_back(FieldMatrix::identity(b, m));
    } else if (name == "identity") {
        for (int j = 0; j < s; ++j) ms.push_back(FieldMatrix::identity(b, m));
    } else if (name == "umatrix") {
        FieldMatrix u(b, m, m);
        for (int k = 0; k < m; ++k)
            for (int l = k; l < m; ++l) u.set(k, l, 1);
        for (int j = 0; j < s; ++j) ms.push_back(u);
    } else if (name == "faure") {
        if (b < static_cast<std::uint32_t>(s))
            throw DomainError("faure preset needs prime b >= s");
        for (int j = 1; j <= s; ++j) ms.push_back(faure_matrix(b, m, j));
    } else if (name == "random") {
        std::mt19937_64 rng(seed);
        for (int j = 0; j < s; ++j) {
            FieldMatrix c(b, m, m);
            for (int r = 0; r < m; ++r)
                for (int l = 0; l < m; ++l) c.set(r, l, uniform_digit(rng, b));
            ms.push_back(std::move(c));
        }
    } else {
        throw UsageError("unknown preset: " + name);
    }
    std::string tag = name;
    if (name == "random") tag += "(seed=" + std::to_string(seed) + ")";
    return GeneratorSet(std::move(ms), tag);
}

std::uint32_t LaurentSeries::coefficient(int e) const {
    if (e < start) return 0;
    const int i = e - start;
    if (i >= static_cast<int>(coeff.size()))
        throw PrecisionError("Laurent series truncated before t^-" + std::to_string(e));
    return coeff[i];
}

GeneratorSet kronecker_matrices(const std::vector<LaurentSeries>& f, int m) {
    if (f.empty()) throw UsageError("kronecker_matrices needs at least one series");
    if (m < 1) throw UsageError("kronecker_matrices needs m >= 1");
    const std::uint32_t b = f[0].base;
    std::vector<FieldMatrix> ms;
    for (const auto& s : f) {
        if (s.base != b) throw UsageError("Laurent series have mixed bases");
        FieldMatrix c(b, m, m);
        for (int k = 1; k <= m; ++k)
            for (int l = 1; l <= m; ++l) c.set(k - 1, l - 1, s.coefficient(k + l - 1));
        ms.push_back(std::move(c));
    }
    return GeneratorSet(std::move(ms), "kronecker");
}

DigitalPoint kronecker_shift_point(const std::vector<LaurentSeries>& f,
                                   std::uint64_t n, int m) {
    if (f.empty()) throw UsageError("kronecker_shift_point needs at least one series");
    const std::uint32_t b = f[0].base;
    DigitalPoint p;
    p.base = b;
    p.digits = m;
    for (const auto& s : f) {
        if (s.base != b) throw UsageError("Laurent series have mixed bases");
        std::uint64_t num = 0;
        for (int i = 1; i <= m; ++i)
            num = num * b + s.coefficient(static_cast<int>(n) + i);
        p.num.push_back(num);
    }
    return p;
}

std::vector<FieldMatrix> interlace2(const std::vector<FieldMatrix>& c, int m) {
    if (c.empty() || c.size() % 2 != 0)
        throw UsageError("interlace2 needs an even, positive number of matrices");
    if (m < 1) throw UsageError("interlace2 needs m >= 1");
    const std::uint32_t b = c[0].base();
    for (const auto& mat : c)
        if (mat.base() != b) throw UsageError("interlace2: mixed bases");
    const int s = static_cast<int>(c.size()) / 2;
    std::vector<FieldMatrix> e;
    for (int j = 1; j <= s; ++j) {
        FieldMatrix ej(b, 2 * m, m);
        for (int u = 0; u < m; ++u)
            for (int v = 1; v <= 2; ++v) {
                const FieldMatrix& src = c[2 * (j - 1) + v - 1];
                for (int l = 0; l < m; ++l)
                    ej.set(2 * u + v - 1, l, src.at(u, l)); // row u+1 of C_{2(j-1)+v}
            }
        e.push_back(std::move(ej));
    }
    return e;
}

GeneratorSet interlaced_generator(const std::vector<FieldMatrix>& c, int m,
                                  std::string provenance) {
    return GeneratorSet(interlace2(c, m), std::move(provenance));
}

std::uint64_t radical_inverse_num(std::uint64_t n, std::uint32_t b, int m) {
    std::uint64_t num = 0;
    std::uint64_t scale = checked_pow(b, m);
    for (int i = 0; i < m && n; ++i) {
        scale /= b;
        num += (n % b) * scale;
        n /= b;
    }
    return num;
}

namespace {
void require_halton_bases(std::span<const std::uint32_t> bases) {
    if (bases.empty()) throw UsageError("halton needs at least one base");
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i] < 2) throw DomainError("halton bases must be >= 2");
        for (std::size_t j = i + 1; j < bases.size(); ++j)
            if (std::gcd(bases[i], bases[j]) != 1)
                throw DomainError("halton bases must be pairwise coprime: " +
                                  std::to_string(bases[i]) + ", " + std::to_string(bases[j]));
    }
}
} // namespace

std::vector<std::uint64_t> halton_point(std::uint64_t n, std::span<const std::uint32_t> bases,
                                        int m) {
    require_halton_bases(bases);
    std::vector<std::uint64_t> nums;
    nums.reserve(bases.size());
    for (auto b : bases) nums.push_back(radical_inverse_num(n, b, m));
    return nums;
}

PointSet halton_prefix(std::uint64_t count, std::span<const std::uint32_t> bases, int m,
                       Exec exec) {
    require_halton_bases(bases);
    std::vector<std::uint64_t> denoms;
    for (auto b : bases) denoms.push_back(checked_pow(b, m));
    const int s = static_cast<int>(bases.size());
    std::vector<std::uint64_t> nums(count * s);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
            for (int j = 0; j < s; ++j)
                nums[i * s + j] = radical_inverse_num(i, bases[j], m);
    } else {
        for (std::uint64_t i = 0; i < count; ++i)
            for (int j = 0; j < s; ++j)
                nums[i * s + j] = radical_inverse_num(i, bases[j], m);
    }
    std::string prov = "halton(";
    for (int j = 0; j < s; ++j) prov += (j ? "," : "") + std::to_string(bases[j]);
    prov += ")";
    PointSet ps(s, std::move(denoms), prov);
    for (std::uint64_t i = 0; i < count; ++i)
        ps.append(std::span<const std::uint64_t>(nums.data() + i * s, s));
    return ps;
}

namespace {

// denominators are powers of small bases by construction; recover (b, m)
std::pair<std::uint64_t, int> factor_pow(std::uint64_t denom) {
    for (std::uint64_t b = 2; b * b <= denom; ++b) {
        if (denom % b == 0) {
            int e = 0;
            std::uint64_t d = denom;
            while (d % b == 0) { d /= b; ++e; }
            if (d != 1) throw UsageError("denominator is not a prime power");
            return {b, e};
        }
    }
    return {denom, 1};
}

} // namespace

std::string pointset_to_csv(const PointSet& p, bool decimals) {
    std::ostringstream os;
    os << "# base=" << p.base() << " dim=" << p.dim() << " prec=" << p.precision()
       << " N=" << p.size() << "\n";
    char buf[64];
    for (std::size_t n = 0; n < p.size(); ++n) {
        for (int j = 0; j < p.dim(); ++j) {
            if (j) os << ",";
            if (decimals) {
                std::snprintf(buf, sizeof buf, "%.17g", p.value(n, j));
                os << buf;
            } else {
                auto [b, e] = factor_pow(p.denom(j));
                os << p.num(n, j) << "/" << b << "^" << e;
            }
        }
        os << "\n";
    }
    return os.str();
}

PointSet pointset_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# base=", 0) != 0)
        throw UsageError("point CSV: missing '# base=...' header");
    std::uint32_t base = 0;
    int dim = 0, prec = 0;
    std::uint64_t count = 0;
    {
        std::istringstream hs(line.substr(2));
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("base=", 0) == 0) base = std::stoul(tok.substr(5));
            else if (tok.rfind("dim=", 0) == 0) dim = std::stoi(tok.substr(4));
            else if (tok.rfind("prec=", 0) == 0) prec = std::stoi(tok.substr(5));
            else if (tok.rfind("N=", 0) == 0) count = std::stoull(tok.substr(2));
        }
    }
    if (dim < 1) throw UsageError("point CSV: bad dimension");

    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::uint64_t> denoms(dim, 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::uint64_t> nums;
        int j = 0;
        while (std::getline(ls, tok, ',')) {
            const auto slash = tok.find('/');
            const auto caret = tok.find('^');
            if (slash == std::string::npos || caret == std::string::npos)
                throw UsageError("point CSV: expected a/b^m coordinate, got '" + tok + "'");
            const std::uint64_t num = std::stoull(tok.substr(0, slash));
            const std::uint64_t b = std::stoull(tok.substr(slash + 1, caret - slash - 1));
            const int e = std::stoi(tok.substr(caret + 1));
            std::uint64_t den = 1;
            for (int i = 0; i < e; ++i) den *= b;
            if (j >= dim) throw UsageError("point CSV: too many coordinates in row");
            if (denoms[j] == 0) denoms[j] = den;
            else if (denoms[j] != den) throw UsageError("point CSV: inconsistent denominators");
            nums.push_back(num);
            ++j;
        }
        if (j != dim) throw UsageError("point CSV: short row");
        rows.push_back(std::move(nums));
    }
    if (rows.size() != count)
        throw UsageError("point CSV: header N does not match row count");
    PointSet ps = (base != 0) ? PointSet(dim, base, prec, "csv")
                              : PointSet(dim, denoms, "csv");
    for (const auto& r : rows) ps.append(std::span<const std::uint64_t>(r));
    return ps;
}

} // namespace qmc
