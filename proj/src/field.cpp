#include "lcc/field.hpp"

namespace lcc {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

constexpr std::uint64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : kMrBases) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : kMrBases) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t modulus) : q_(modulus) {
    if (modulus < 3) throw std::invalid_argument("field modulus must be >= 3");
    if (!is_prime_u64(modulus)) throw std::invalid_argument("field modulus must be prime");
}

FieldElement sample_uniform(const PrimeField& field, SeededRng& rng) {
    const std::uint64_t q = field.modulus();
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % q;
    std::uint64_t x;
    do {
        x = rng.next_u64();
    } while (x >= limit);
    return field.element(x % q);
}

} // namespace lcc
