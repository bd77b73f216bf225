#include "expaudit/core_arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ea::arith {

std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> f;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.emplace_back(p, e);
        }
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

Modulus::Modulus(u64 v) : value(v) {
    if (v == 0) throw PreconditionError("modulus must be >= 1");
    factorization = factorize(v);
}

u64 Modulus::euler_phi() const {
    u64 phi = value;
    for (auto& [p, e] : factorization) phi -= phi / p;
    return phi;
}

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<i128>(a) * b) % m);
}

u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a % m + b % m;
    if (s >= m) s -= m;
    return s;
}

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 reduce(i64 x, u64 m) {
    i64 r = x % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

u64 mod_inverse(u64 x, u64 m) {
    if (m == 1) return 0;
    i64 a = static_cast<i64>(x % m), b = static_cast<i64>(m);
    i64 u0 = 1, u1 = 0;
    while (b) {
        i64 q = a / b;
        a -= q * b;
        std::swap(a, b);
        u0 -= q * u1;
        std::swap(u0, u1);
    }
    if (a != 1)
        throw NonInvertibleError("residue " + std::to_string(x) + " not invertible mod " +
                                 std::to_string(m));
    return reduce(u0, m);
}

ResidueClass mod_inverse(const ResidueClass& x) {
    return {mod_inverse(x.residue, x.modulus.value), x.modulus};
}

std::pair<ResidueClass, ResidueClass> crt_split(const ResidueClass& x, const Modulus& m1,
                                                const Modulus& m2) {
    if (std::gcd(m1.value, m2.value) != 1)
        throw NotCoprimeError("crt_split: moduli " + std::to_string(m1.value) + ", " +
                              std::to_string(m2.value) + " share a factor");
    if (m1.value * m2.value != x.modulus.value)
        throw PreconditionError("crt_split: m1*m2 != modulus");
    return {ResidueClass(x.residue % m1.value, m1), ResidueClass(x.residue % m2.value, m2)};
}

ResidueClass crt_combine(const ResidueClass& x1, const ResidueClass& x2) {
    u64 m1 = x1.modulus.value, m2 = x2.modulus.value;
    if (std::gcd(m1, m2) != 1) throw NotCoprimeError("crt_combine: moduli share a factor");
    u64 m = m1 * m2;
    // x = x1 + m1 * ((x2 - x1)/m1 mod m2)
    u64 t = mulmod(reduce(static_cast<i64>(x2.residue) - static_cast<i64>(x1.residue % m2), m2),
                   mod_inverse(m1 % m2, m2), m2);
    return {addmod(x1.residue, mulmod(m1, t, m), m), Modulus(m)};
}

int omega(const Modulus& s) { return s.omega(); }

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

std::vector<u32> primes_up_to(u32 n) {
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    std::vector<u32> out;
    for (u32 i = 2; i <= n; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (u64 j = static_cast<u64>(i) * i; j <= n; j += i) comp[j] = true;
        }
    }
    return out;
}

std::vector<u32> primes_in(u32 lo, u32 hi) {
    std::vector<u32> out;
    for (u32 p : primes_up_to(hi))
        if (p >= lo) out.push_back(p);
    return out;
}

u64 smallest_primitive_root(u64 q) {
    if (q == 2) return 1;
    if (!is_prime(q)) throw PreconditionError("primitive root requested for composite modulus");
    auto fac = factorize(q - 1);
    for (u64 g = 2; g < q; ++g) {
        bool ok = true;
        for (auto& [p, e] : fac) {
            if (powmod(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw Error("no primitive root found");  // unreachable for prime q
}

DirichletCharacter::DirichletCharacter(u64 q, u64 k) : q_(q), k_(k % (q - 1)) {
    if (!is_prime(q) || q < 3) throw PreconditionError("character modulus must be an odd prime");
    g_ = smallest_primitive_root(q);
    dlog_.assign(q, 0);
    u64 x = 1;
    for (u64 j = 0; j < q - 1; ++j) {
        dlog_[x] = static_cast<u32>(j);
        x = mulmod(x, g_, q);
    }
    roots_.resize(q - 1);
    for (u64 j = 0; j < q - 1; ++j) {
        double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(q - 1);
        roots_[j] = {std::cos(theta), std::sin(theta)};
    }
    // chi(-1) = e(k * dlog(-1) / (q-1)) with dlog(-1) = (q-1)/2.
    parity_ = (mulmod(k_, (q - 1) / 2, q - 1) == 0) ? 1 : -1;
}

cplx DirichletCharacter::operator()(i64 n) const {
    u64 r = reduce(n, q_);
    if (r == 0) return {0.0, 0.0};
    return roots_[mulmod(k_, dlog_[r], q_ - 1)];
}

cplx DirichletCharacter::ratio(i64 n, i64 m) const {
    u64 mr = reduce(m, q_);
    return (*this)(n)*roots_[mulmod(k_, dlog_[mod_inverse(mr, q_)], q_ - 1)];
}

DirichletCharacter DirichletCharacter::conjugate() const {
    return DirichletCharacter(q_, (q_ - 1 - k_) % (q_ - 1));
}

u64 DirichletCharacter::dlog(u64 n) const {
    u64 r = reduce(static_cast<i64>(n), q_);
    if (r == 0) throw PreconditionError("dlog of a multiple of q");
    return dlog_[r];
}

std::vector<DirichletCharacter> all_characters(u64 q) {
    std::vector<DirichletCharacter> out;
    out.reserve(q - 1);
    for (u64 k = 0; k < q - 1; ++k) out.emplace_back(q, k);
    return out;
}

}  // namespace ea::arith
