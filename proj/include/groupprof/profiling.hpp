#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "groupprof/corpus.hpp"
#include "groupprof/lm.hpp"

namespace groupprof {

// Component probabilities are floored at this value inside the E-step and
// the log-likelihood so idf-annihilated terms never produce 0/0 or log(0).
inline constexpr double kProbFloor = 1e-12;

// Distribution concentrating on terms prominent in exactly one member's
// model: raw(t) = sum_i p(t|u_i) * prod_{j!=i} (1 - p(t|u_j)) * idf_G(t),
// normalized. A term present in every member's model has idf 0 and ends up
// with probability exactly 0.
struct SpecificModel {
  TermDistribution dist;
  bool degenerate = false;  // all raw weights were 0; dist is uniform
};

SpecificModel build_specific_model(const std::vector<UserModel>& members,
                                   const std::set<std::string>& group_vocabulary);
SpecificModel build_specific_model(const std::vector<UserModel>& members);

struct LambdaTriple {
  double group = 0.0;
  double collection = 0.0;
  double specific = 0.0;

  double sum() const { return group + collection + specific; }
};

struct EmConfig {
  double tol = 1e-6;    // relative log-likelihood change
  int max_iters = 200;
};

struct EmDiagnostics {
  int iterations = 0;
  double final_log_likelihood = 0.0;
  bool converged = false;
  // ll_trace[0] is the likelihood of the initial parameters; one entry is
  // appended after every EM update. Non-decreasing within 1e-9.
  std::vector<double> ll_trace;
};

struct GroupProfile {
  std::string group_label;
  TermDistribution theta_g;
  std::map<std::string, LambdaTriple> lambdas;  // user_id -> learned triple
  EmDiagnostics diagnostics;
  bool singleton = false;
  bool specific_degenerate = false;

  const LambdaTriple* lambda_for(const std::string& user_id) const;
  LambdaTriple average_lambda() const;
};

// p(t|u) = lambda_g p(t|theta_g) + lambda_c p(t|theta_c) + lambda_s p(t|theta_s).
double mixture_term_probability(const std::string& term, const LambdaTriple& lambda,
                                const TermDistribution& theta_g,
                                const TermDistribution& theta_c,
                                const TermDistribution& theta_s);

// sum_u sum_t c(t,u) log p(t|u) with component probabilities floored at
// kProbFloor; compensated summation in sorted user/term order. Throws if an
// observed term still gets a nonpositive mixture probability.
double log_likelihood(const std::vector<UserModel>& members,
                      const std::map<std::string, LambdaTriple>& lambdas,
                      const TermDistribution& theta_g, const TermDistribution& theta_c,
                      const TermDistribution& theta_s);

// EM estimation of theta_g and per-user mixing weights with theta_c and the
// specific model held fixed. theta_s is computed once from the members and
// frozen. Members with empty counts are ignored; at least one member with
// counts is required. Deterministic: members and vocabulary are processed in
// sorted order regardless of input order.
GroupProfile estimate_group_profile(const std::vector<UserModel>& members,
                                    const TermDistribution& theta_c,
                                    const EmConfig& config = {});

// Estimates one profile per assignment, skipping the reserved "unknown"
// group and groups without any usable member model. `threads` = 0 means all
// hardware threads.
std::map<std::string, GroupProfile> estimate_profiles(
    const std::vector<GroupAssignment>& assignments,
    const std::map<std::string, UserModel>& user_models, const TermDistribution& theta_c,
    const EmConfig& config = {}, int threads = 1);

}  // namespace groupprof
