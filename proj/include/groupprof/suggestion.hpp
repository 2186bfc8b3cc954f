#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "groupprof/corpus.hpp"
#include "groupprof/lm.hpp"
#include "groupprof/profiling.hpp"

namespace groupprof {

enum class Strategy { group, preferences, combined };
std::string to_string(Strategy s);

struct RankedItem {
  std::string doc_id;
  double score = 0.0;  // log-probability; -inf for unscoreable candidates
  int rank = 0;        // 1-based
};

struct RankedRun {
  std::string request_id;
  Strategy strategy = Strategy::group;
  std::vector<RankedItem> items;
  std::string tag;
  bool cold_start = false;       // preference model was empty
  bool lambda_fallback = false;  // user unseen at estimation time
  bool degraded = false;         // no profile available; pure collection scoring
};

inline constexpr double kDefaultJmLambda = 0.9;

// Candidates scored against theta_g JM-smoothed with the collection model.
RankedRun rank_by_group(const SuggestionRequest& request, const Corpus& corpus,
                        const GroupProfile& profile, const TermDistribution& theta_c,
                        double jm_lambda = kDefaultJmLambda);

// Preference-model baseline. An empty user model degrades to pure
// collection-model scoring with the cold_start flag set.
RankedRun rank_by_preferences(const SuggestionRequest& request, const Corpus& corpus,
                              const UserModel& user, const TermDistribution& theta_c,
                              double jm_lambda = kDefaultJmLambda);

// Scores candidates under the per-term combined model
//   p(t) = lambda_s p(t|theta_u) + lambda_g p(t|theta_g) + lambda_c p(t|theta_c)
// using the user's learned triple; users unseen at estimation time fall back
// to the group-average triple (flagged).
RankedRun rank_combined(const SuggestionRequest& request, const Corpus& corpus,
                        const UserModel& user, const GroupProfile& profile,
                        const TermDistribution& theta_c);

// 6-column run format: `request_id Q0 doc_id rank score tag`. Infinite
// sentinel scores are serialized as the minimum finite score minus 1000.
void write_run(std::ostream& out, const RankedRun& run);

}  // namespace groupprof
