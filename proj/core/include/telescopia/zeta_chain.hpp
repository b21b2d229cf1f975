// Integer zeta values, two equivalent series built on them, and a chain of
// telescoping checks linking a base sum, a base product, and the catalog.
#ifndef TELESCOPIA_ZETA_CHAIN_HPP
#define TELESCOPIA_ZETA_CHAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "telescopia/numerics.hpp"

namespace telescopia {

struct ZetaValue {
    int n = 0;
    double value = 0.0;
    double tail_bound = 0.0;  // bound on |true - value| from the tail correction
};

// zeta(n) for integer n >= 2, accurate to tol.
ZetaValue zeta_int(int n, double tol = 1e-12);

// sum_{k>=1} (-1)^(k+1) s^(k+1) zeta(k+1), valid for |s| < 1.
Scalar alternating_zeta_series(Scalar s, double tol = 1e-12);

// sum_{k>=1} s^2 / (k (k+s)); agrees with the alternating form on |s| < 1
// and extends it elsewhere. s = 0 gives 0; negative integers are poles.
Scalar rational_series(Scalar s, double tol = 1e-12);

// Base telescoping pair used by the chain below.
Scalar base_sum(Scalar b, std::int64_t N);      // sum_{k=1..N} 1/((bk+1)(bk+1-b))
Scalar base_product(Scalar b, std::int64_t N);  // prod_{k=2..N} k(bk+1)/((bk-b+1)(k+1))
Scalar base_sum_limit(Scalar b);                // 1/b
Scalar base_product_limit(Scalar b);            // 2b/(b+1)

struct ChainLink {
    std::string name;
    Scalar expected{};
    Scalar observed{};
    double abs_err = 0.0;
    bool pass = false;
};

struct ChainReport {
    Scalar b{};
    double tolerance = 0.0;
    std::vector<ChainLink> links;
    bool all_pass = false;
};

// Links the base sum, the base product, and the catalog product evaluated at
// s = 2b/(b+1); each link is checked numerically to tol.
ChainReport verify_chain(Scalar b, double tol = 1e-8);

}  // namespace telescopia

#endif
