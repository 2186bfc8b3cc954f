#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groupprof/corpus.hpp"
#include "groupprof/lm.hpp"
#include "groupprof/profiling.hpp"
#include "groupprof/suggestion.hpp"

namespace groupprof {

// Binary relevance at rating > threshold. Returns nullopt when the request
// has no relevant document among the ranked candidates (excluded from MAP
// rather than counted as 0). Throws if qrels is empty.
std::optional<double> average_precision(const RankedRun& run,
                                        const std::map<std::string, int>& qrels,
                                        int threshold = 2);
// Same, with a run/request consistency check.
std::optional<double> average_precision(const RankedRun& run,
                                        const SuggestionRequest& request,
                                        int threshold = 2);

struct TTestResult {
  double t = 0.0;
  double p = 0.5;
  std::size_t n = 0;
  bool degenerate = false;  // zero variance of differences
};

// Paired one-tailed t-test with alternative "a > b". Requires identical key
// sets and n >= 2.
TTestResult paired_one_tailed_ttest(const std::map<std::string, double>& ap_a,
                                    const std::map<std::string, double>& ap_b);

// P(T > t) for Student's t with `dof` degrees of freedom, via the
// regularized incomplete beta function.
double student_t_sf(double t, double dof);
double regularized_incomplete_beta(double a, double b, double x);

struct EvalResult {
  std::string strategy;
  std::map<std::string, double> per_request_ap;
  double map_score = 0.0;
  std::size_t n_requests = 0;  // requests with at least one relevant doc
};

struct PipelineOptions {
  CollectionScope scope = CollectionScope::all;
  EmConfig em;
  double jm_lambda = kDefaultJmLambda;
  int relevance_threshold = 2;
  // When set, ranking-time preference models are rebuilt from the first N
  // tokens of each user's relevant documents; profiles still come from the
  // full models. Models sparse-profile users against well-observed groups.
  std::optional<std::size_t> cold_start_tokens;
  std::optional<std::vector<int>> age_bins;
  int threads = 1;  // 0 = all hardware threads
};

struct StrategyComparison {
  EvalResult group;
  EvalResult preferences;
  EvalResult combined;
  TTestResult combined_vs_preferences;
  TTestResult combined_vs_group;
};

// Runs the full group / preferences / combined pipelines for one criterion
// and evaluates them against the requests' qrels.
StrategyComparison compare_strategies(const Corpus& corpus, Criterion criterion,
                                      const PipelineOptions& options = {});

struct SweepGroupPoint {
  std::string group_label;
  std::size_t size = 0;  // users in the group
  double map_score = 0.0;
  std::size_t n_requests = 0;
};

struct SweepResult {
  std::string criterion = "age";
  std::string bin_spec;
  std::vector<SweepGroupPoint> per_group;
  double overall_map = 0.0;
  std::size_t n_requests = 0;
};

// Rebuilds age groups at each bin width, re-estimates profiles, ranks by
// group and evaluates. Widths must be positive.
std::vector<SweepResult> granularity_sweep(const Corpus& corpus,
                                           const std::vector<int>& bin_widths,
                                           const PipelineOptions& options = {});

}  // namespace groupprof
