#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "groupprof/corpus.hpp"

namespace groupprof {

// Sparse probability distribution over terms. Entries hold only positive
// probabilities; a missing term has probability 0. Either the distribution is
// empty or its entries sum to 1 within 1e-9.
struct TermDistribution {
  std::map<std::string, double> entries;

  bool empty() const { return entries.empty(); }
  double prob(const std::string& term) const;
  double sum() const;

  // Normalizes non-negative weights into a distribution, dropping zeros.
  // Throws if any weight is negative or the total is not positive.
  static TermDistribution normalized(const std::map<std::string, double>& weights);

  // TSV rows `term \t probability`, descending probability, ties by term.
  void write_tsv(std::ostream& out) const;
  static TermDistribution read_tsv(std::istream& in);
};

// Lowercases, splits on non-alphanumerics (bytes >= 0x80 are treated as
// letters so multi-byte UTF-8 stays intact), then drops pure-digit tokens,
// single-character tokens and stopwords.
std::vector<std::string> tokenize(std::string_view text);

// Term -> token count of the tokenized text, sorted by term.
std::map<std::string, double> term_frequencies(std::string_view text);

// Frozen English stopword list shipped with the library.
const std::vector<std::string>& stopword_list();
bool is_stopword(const std::string& term);

enum class CollectionScope { all, preferences, candidates };
CollectionScope collection_scope_from_string(const std::string& name);

// Collection (general) model: term frequencies over all documents,
// normalized. Throws if nothing survives tokenization.
TermDistribution build_collection_model(const std::vector<std::string>& documents);
TermDistribution build_collection_model(const Corpus& corpus,
                                        CollectionScope scope = CollectionScope::all);

struct UserModel {
  std::string user_id;
  std::map<std::string, double> counts;  // rating-weighted c(t,u)
  TermDistribution lm;                   // counts normalized
  bool cold_start = false;               // no document above the threshold

  bool empty() const { return counts.empty(); }
};

// c(t,u) = sum over documents rated above `relevance_threshold` of
// rating * tf(t, doc). Users with no relevant document yield an empty,
// cold_start-flagged model.
UserModel build_user_model(const UserRecord& user, int relevance_threshold = 2);

// Same, but only the first `max_tokens` tokens of the user's relevant
// documents (in document order) contribute; models sparse-history users.
UserModel build_user_model_truncated(const UserRecord& user, int relevance_threshold,
                                     std::size_t max_tokens);

struct DocScore {
  double log_prob = 0.0;
  std::size_t scored_terms = 0;  // unique in-vocabulary terms
  std::size_t oov_terms = 0;     // unique terms absent from the background
};

// Query-likelihood score of the document under the Jelinek-Mercer mixture
// jm_lambda * p(t|model) + (1 - jm_lambda) * p(t|background), summed as
// tf(t) * log(...) over the document's terms. Terms the background does not
// cover are skipped and counted in oov_terms.
DocScore score_document(const CandidateDocument& doc, const TermDistribution& model,
                        const TermDistribution& background, double jm_lambda);

}  // namespace groupprof
