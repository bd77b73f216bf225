#pragma once

#include <utility>
#include <vector>

#include "expaudit/common.hpp"

namespace ea::arith {

// Positive integer together with its prime factorization.
struct Modulus {
    u64 value = 1;
    std::vector<std::pair<u64, int>> factorization;  // primes strictly increasing

    Modulus() = default;
    explicit Modulus(u64 v);

    int omega() const { return static_cast<int>(factorization.size()); }
    u64 euler_phi() const;
    bool is_prime() const {
        return factorization.size() == 1 && factorization[0].second == 1;
    }
    bool is_prime_power() const { return factorization.size() == 1; }
};

struct ResidueClass {
    u64 residue = 0;
    Modulus modulus;

    ResidueClass() = default;
    ResidueClass(u64 r, Modulus m) : residue(r % m.value), modulus(std::move(m)) {}
};

u64 mulmod(u64 a, u64 b, u64 m);
u64 addmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
// Canonical representative of a signed value.
u64 reduce(i64 x, u64 m);

// Inverse of x mod m; throws NonInvertibleError when gcd(x, m) > 1.
u64 mod_inverse(u64 x, u64 m);
ResidueClass mod_inverse(const ResidueClass& x);

// Reductions of x modulo the coprime factors m1 * m2 = x.modulus.
std::pair<ResidueClass, ResidueClass> crt_split(const ResidueClass& x, const Modulus& m1,
                                                const Modulus& m2);
// Unique lift of (x1 mod m1, x2 mod m2) modulo m1 * m2.
ResidueClass crt_combine(const ResidueClass& x1, const ResidueClass& x2);

int omega(const Modulus& s);

bool is_prime(u64 n);
std::vector<u32> primes_up_to(u32 n);
std::vector<u32> primes_in(u32 lo, u32 hi);
std::vector<std::pair<u64, int>> factorize(u64 n);
u64 smallest_primitive_root(u64 q);

// Character mod prime q determined by chi(g) = e(k/(q-1)) for the smallest
// primitive root g.  Values come out of a discrete-log table built once.
class DirichletCharacter {
public:
    DirichletCharacter(u64 q, u64 k);

    u64 conductor() const { return q_; }
    u64 generator() const { return g_; }
    u64 exponent() const { return k_; }
    bool primitive() const { return k_ != 0; }
    bool trivial() const { return k_ == 0; }
    int parity() const { return parity_; }

    cplx operator()(i64 n) const;
    // chi(n / m) for gcd(m, q) = 1.
    cplx ratio(i64 n, i64 m) const;
    DirichletCharacter conjugate() const;

    // Exponent of chi(n) in units of 1/(q-1); n must be coprime to q.
    u64 dlog(u64 n) const;

private:
    u64 q_, g_, k_;
    int parity_;
    std::vector<u32> dlog_;       // dlog_[x] for 1 <= x < q
    std::vector<cplx> roots_;     // e(j/(q-1)) for 0 <= j < q-1
};

std::vector<DirichletCharacter> all_characters(u64 q);

inline cplx char_eval(const DirichletCharacter& chi, i64 n) { return chi(n); }

}  // namespace ea::arith
