#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "groupprof/corpus.hpp"
#include "groupprof/lm.hpp"
#include "groupprof/profiling.hpp"

namespace groupprof {

// Deterministic synthetic corpus: users sample terms from a known
// three-component mixture, candidates are planted per group with known
// relevance. Group k occupies the age decade [20+10k, 30+10k), so age
// binning at width 10 aligns exactly with the true groups.
struct SynthSpec {
  std::uint64_t seed = 1;
  std::size_t vocab_size = 100;
  std::size_t n_groups = 4;
  std::size_t users_per_group = 10;
  std::size_t tokens_per_user = 400;
  LambdaTriple lambda_true{0.5, 0.3, 0.2};
  double group_separation = 0.9;  // 0 = all groups share one model
  std::size_t n_candidates = 60;
  double relevant_fraction = 0.1;  // of all candidates, per group
};

struct GroundTruth {
  TermDistribution theta_c;                 // true general model
  std::vector<TermDistribution> theta_g;    // true group models, by group index
  std::map<std::string, std::size_t> user_group;
  std::vector<std::vector<std::string>> relevant_docs;  // by group index
  LambdaTriple lambda;
};

std::pair<Corpus, GroundTruth> generate(const SynthSpec& spec);

// Counter-based generator: stateless, platform-independent, safe to use
// from parallel streams.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t next_u64(std::uint64_t stream, std::uint64_t counter) const;
  double uniform(std::uint64_t stream, std::uint64_t counter) const;  // [0, 1)
};

}  // namespace groupprof
