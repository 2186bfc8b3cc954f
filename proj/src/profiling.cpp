#include "groupprof/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace groupprof {

namespace {

// Kahan-compensated accumulator; likelihood sums must be reproducible
// across platforms and member orderings.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double floored(double p) { return p < kProbFloor ? kProbFloor : p; }

std::vector<const UserModel*> usable_members(const std::vector<UserModel>& members) {
  std::vector<const UserModel*> out;
  for (const auto& m : members)
    if (!m.counts.empty()) out.push_back(&m);
  std::sort(out.begin(), out.end(), [](const UserModel* a, const UserModel* b) {
    return a->user_id < b->user_id;
  });
  return out;
}

}  // namespace

const LambdaTriple* GroupProfile::lambda_for(const std::string& user_id) const {
  auto it = lambdas.find(user_id);
  return it == lambdas.end() ? nullptr : &it->second;
}

LambdaTriple GroupProfile::average_lambda() const {
  LambdaTriple avg;
  if (lambdas.empty()) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  for (const auto& [id, l] : lambdas) {
    avg.group += l.group;
    avg.collection += l.collection;
    avg.specific += l.specific;
  }
  double n = static_cast<double>(lambdas.size());
  return {avg.group / n, avg.collection / n, avg.specific / n};
}

SpecificModel build_specific_model(const std::vector<UserModel>& members,
                                   const std::set<std::string>& group_vocabulary) {
  auto usable = usable_members(members);
  if (usable.empty()) throw Error("build_specific_model: empty member list");
  double group_size = static_cast<double>(usable.size());

  std::map<std::string, double> raw;
  bool any_positive = false;
  for (const auto& term : group_vocabulary) {
    std::size_t df = 0;
    for (const auto* m : usable)
      if (m->lm.prob(term) > 0.0) ++df;
    if (df == 0) {
      raw[term] = 0.0;
      continue;
    }
    double idf = std::log(group_size / static_cast<double>(df));
    double marginal = 0.0;
    for (const auto* mi : usable) {
      double p_i = mi->lm.prob(term);
      if (p_i <= 0.0) continue;
      double others = 1.0;
      for (const auto* mj : usable) {
        if (mj == mi) continue;
        others *= 1.0 - mj->lm.prob(term);
      }
      marginal += p_i * others;
    }
    double w = marginal * idf;
    raw[term] = w;
    if (w > 0.0) any_positive = true;
  }

  SpecificModel model;
  if (!any_positive) {
    // |G| = 1 or every term universal: fall back to uniform.
    model.degenerate = true;
    if (group_vocabulary.empty()) throw Error("build_specific_model: empty vocabulary");
    double u = 1.0 / static_cast<double>(group_vocabulary.size());
    for (const auto& term : group_vocabulary) model.dist.entries[term] = u;
    return model;
  }
  model.dist = TermDistribution::normalized(raw);
  return model;
}

SpecificModel build_specific_model(const std::vector<UserModel>& members) {
  std::set<std::string> vocab;
  for (const auto& m : members)
    for (const auto& [t, c] : m.counts) {
      (void)c;
      vocab.insert(t);
    }
  return build_specific_model(members, vocab);
}

double mixture_term_probability(const std::string& term, const LambdaTriple& lambda,
                                const TermDistribution& theta_g,
                                const TermDistribution& theta_c,
                                const TermDistribution& theta_s) {
  return lambda.group * theta_g.prob(term) + lambda.collection * theta_c.prob(term) +
         lambda.specific * theta_s.prob(term);
}

double log_likelihood(const std::vector<UserModel>& members,
                      const std::map<std::string, LambdaTriple>& lambdas,
                      const TermDistribution& theta_g, const TermDistribution& theta_c,
                      const TermDistribution& theta_s) {
  auto usable = usable_members(members);
  KahanSum ll;
  for (const auto* m : usable) {
    auto it = lambdas.find(m->user_id);
    if (it == lambdas.end())
      throw Error("log_likelihood: no mixing weights for user " + m->user_id);
    const LambdaTriple& l = it->second;
    for (const auto& [term, count] : m->counts) {
      double p = l.group * floored(theta_g.prob(term)) +
                 l.collection * floored(theta_c.prob(term)) +
                 l.specific * floored(theta_s.prob(term));
      if (!(p > 0.0))
        throw Error("log_likelihood: nonpositive mixture probability for observed term \"" +
                    term + "\"");
      ll.add(count * std::log(p));
    }
  }
  return ll.sum;
}

GroupProfile estimate_group_profile(const std::vector<UserModel>& members,
                                    const TermDistribution& theta_c,
                                    const EmConfig& config) {
  auto usable = usable_members(members);
  if (usable.empty()) throw Error("estimate_group_profile: empty group");

  // Sorted group vocabulary; term ids index every dense vector below.
  std::vector<std::string> vocab;
  {
    std::set<std::string> v;
    for (const auto* m : usable)
      for (const auto& [t, c] : m->counts) {
        (void)c;
        v.insert(t);
      }
    vocab.assign(v.begin(), v.end());
  }
  const std::size_t n_terms = vocab.size();
  std::map<std::string, std::size_t> term_id;
  for (std::size_t i = 0; i < n_terms; ++i) term_id[vocab[i]] = i;

  GroupProfile profile;
  profile.singleton = usable.size() == 1;

  // Specific model: computed once from the member models and frozen.
  SpecificModel specific;
  {
    std::set<std::string> vset(vocab.begin(), vocab.end());
    std::vector<UserModel> copies;
    copies.reserve(usable.size());
    for (const auto* m : usable) copies.push_back(*m);
    specific = build_specific_model(copies, vset);
  }
  profile.specific_degenerate = specific.degenerate;

  std::vector<double> p_c(n_terms), p_s(n_terms);
  for (std::size_t i = 0; i < n_terms; ++i) {
    p_c[i] = floored(theta_c.prob(vocab[i]));
    p_s[i] = floored(specific.dist.prob(vocab[i]));
  }

  // Per-user sparse counts in sorted term order.
  struct MemberData {
    std::string user_id;
    std::vector<std::pair<std::size_t, double>> counts;
    double total = 0.0;
  };
  std::vector<MemberData> data;
  data.reserve(usable.size());
  for (const auto* m : usable) {
    MemberData d;
    d.user_id = m->user_id;
    for (const auto& [t, c] : m->counts) {
      d.counts.emplace_back(term_id.at(t), c);
      d.total += c;
    }
    data.push_back(std::move(d));
  }
  const std::size_t n_users = data.size();

  // Init: theta_g = normalized pooled counts, lambda = (1/3, 1/3, 1/3).
  std::vector<double> theta_g(n_terms, 0.0);
  {
    double pooled = 0.0;
    for (const auto& d : data)
      for (const auto& [t, c] : d.counts) {
        theta_g[t] += c;
        pooled += c;
      }
    for (auto& p : theta_g) p /= pooled;
  }
  std::vector<LambdaTriple> lambda(n_users, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});

  auto current_ll = [&] {
    KahanSum ll;
    for (const auto& d : data) {
      const LambdaTriple& l = lambda[&d - data.data()];
      for (const auto& [t, c] : d.counts) {
        double p = l.group * floored(theta_g[t]) + l.collection * p_c[t] + l.specific * p_s[t];
        if (!(p > 0.0))
          throw Error("estimate_group_profile: nonpositive mixture probability");
        ll.add(c * std::log(p));
      }
    }
    return ll.sum;
  };

  EmDiagnostics diag;
  diag.ll_trace.push_back(current_ll());
  double prev_ll = diag.ll_trace.back();

  std::vector<double> num_g(n_terms);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    std::fill(num_g.begin(), num_g.end(), 0.0);
    double den_g = 0.0;
    std::vector<LambdaTriple> next_lambda(n_users);

    for (std::size_t u = 0; u < n_users; ++u) {
      const LambdaTriple& l = lambda[u];
      double s_g = 0.0, s_c = 0.0, s_s = 0.0;
      for (const auto& [t, c] : data[u].counts) {
        // E-step responsibilities with floored component probabilities.
        double m_g = l.group * floored(theta_g[t]);
        double m_c = l.collection * p_c[t];
        double m_s = l.specific * p_s[t];
        double denom = m_g + m_c + m_s;
        double r_g = m_g / denom;
        double r_c = m_c / denom;
        double r_s = m_s / denom;
        num_g[t] += c * r_g;
        den_g += c * r_g;
        s_g += c * r_g;
        s_c += c * r_c;
        s_s += c * r_s;
      }
      double total = s_g + s_c + s_s;
      next_lambda[u] = {s_g / total, s_c / total, s_s / total};
    }

    if (den_g > 0.0)
      for (std::size_t t = 0; t < n_terms; ++t) theta_g[t] = num_g[t] / den_g;
    lambda = std::move(next_lambda);

    double ll = current_ll();
    diag.ll_trace.push_back(ll);
    diag.iterations = iter + 1;
    double denom = std::max(std::abs(ll), 1e-300);
    if (std::abs(ll - prev_ll) / denom < config.tol) {
      diag.converged = true;
      prev_ll = ll;
      break;
    }
    prev_ll = ll;
  }
  diag.final_log_likelihood = prev_ll;

  // Pin the sum-to-1 invariants exactly.
  {
    KahanSum total;
    for (double p : theta_g) total.add(p);
    for (std::size_t t = 0; t < n_terms; ++t) {
      double p = theta_g[t] / total.sum;
      if (p > 0.0) profile.theta_g.entries[vocab[t]] = p;
    }
  }
  for (std::size_t u = 0; u < n_users; ++u) {
    LambdaTriple l = lambda[u];
    double s = l.sum();
    profile.lambdas[data[u].user_id] = {l.group / s, l.collection / s, l.specific / s};
  }
  profile.diagnostics = std::move(diag);
  return profile;
}

std::map<std::string, GroupProfile> estimate_profiles(
    const std::vector<GroupAssignment>& assignments,
    const std::map<std::string, UserModel>& user_models, const TermDistribution& theta_c,
    const EmConfig& config, int threads) {
  struct Task {
    std::string label;
    std::vector<UserModel> members;
  };
  std::vector<Task> tasks;
  for (const auto& g : assignments) {
    if (g.group_label == kUnknownGroupLabel) continue;
    Task task;
    task.label = g.group_label;
    for (const auto& id : g.member_user_ids) {
      auto it = user_models.find(id);
      if (it != user_models.end() && !it->second.counts.empty())
        task.members.push_back(it->second);
    }
    if (!task.members.empty()) tasks.push_back(std::move(task));
  }

  std::vector<GroupProfile> profiles(tasks.size());
  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, tasks.size() ? tasks.size() : 1);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      profiles[i] = estimate_group_profile(tasks[i].members, theta_c, config);
      profiles[i].group_label = tasks[i].label;
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < tasks.size(); i += n_threads) {
          profiles[i] = estimate_group_profile(tasks[i].members, theta_c, config);
          profiles[i].group_label = tasks[i].label;
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::map<std::string, GroupProfile> result;
  for (auto& p : profiles) result[p.group_label] = std::move(p);
  return result;
}

}  // namespace groupprof
