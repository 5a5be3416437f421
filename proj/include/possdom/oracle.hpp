#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "possdom/domain.hpp"
#include "possdom/witness.hpp"

namespace possdom {

/// Brute-force ground truth. All oracles enumerate witness tables directly
/// (an odometer over the free entries, conservativeness baked into the
/// choice lists) and filter by closure, so they share no machinery with the
/// graph or search code paths they referee. Exact or refusing, never
/// sampling.

/// Number of candidate tables the oracle for `kind` would enumerate,
/// saturated at 2^63. majority and minority have equal spaces.
std::uint64_t oracle_space(const Domain& dom, WitnessKind kind);

/// Enumeration budget. A witness found within the budget is an exact yes
/// regardless of the total space; a "none" is only reported after the whole
/// space was covered. When the space exceeds the budget and no witness
/// turned up in the first kOracleSpaceLimit candidates, the oracle refuses
/// with TooLarge rather than guess.
inline constexpr std::uint64_t kOracleSpaceLimit = 100'000'000;

/// Visits every closure-passing binary witness in enumeration order until
/// the callback returns false. Needs the full space, so it throws TooLarge
/// whenever the space exceeds the budget.
void for_each_binary_aggregator(
    const Domain& dom, const std::function<bool(const AggregatorWitness&)>& visit);

/// First enumerated binary aggregator that is not dictatorial, or none.
std::optional<AggregatorWitness> oracle_binary_nondictatorial(
    const Domain& dom, std::uint64_t budget = kOracleSpaceLimit);

/// First closure-passing witness whose pair blocks are forced to maj / xor,
/// free entries being the pairwise-distinct triples; or none.
std::optional<AggregatorWitness> oracle_majority(
    const Domain& dom, std::uint64_t budget = kOracleSpaceLimit);
std::optional<AggregatorWitness> oracle_minority(
    const Domain& dom, std::uint64_t budget = kOracleSpaceLimit);

/// First closure-passing witness obeying the near-unanimity equalities:
/// per ordered pair (x, y) one shared value for the three one-y-two-x
/// patterns, distinct triples free; or none.
std::optional<AggregatorWitness> oracle_wnu(const Domain& dom,
                                            std::uint64_t budget = kOracleSpaceLimit);

enum class GenStructure {
    uniform_random,   // distinct rows drawn uniformly from the full product
    product,          // concatenation of two independently drawn factors
    affine_subspace,  // random xor-closed linear subspace of {0,1}^m
    blocked_seeking,  // uniform-random retries until totally blocked
};

struct GenParams {
    int m = 0;
    std::vector<int> sizes;  // per-issue alphabet capacity, each >= 2
    int target_rows = 0;
    GenStructure structure = GenStructure::uniform_random;
    std::uint64_t seed = 0;
    int max_attempts = 1000;
};

/// Deterministic instance generator: the same params give the same Domain
/// on every platform. target_rows is a goal; product rounds it to a factor
/// grid and affine_subspace to a power of two. Throws InvalidParams on bad
/// shapes and GenerationFailed when the attempt cap runs out.
Domain generate(const GenParams& params);

}  // namespace possdom
