#include "dune/rng.hpp"

#include <numeric>

namespace dune {

std::vector<std::size_t> random_permutation(std::size_t count, Rng& rng) {
    std::vector<std::size_t> perm(count);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle_in_place(perm, rng);
    return perm;
}

}  // namespace dune
