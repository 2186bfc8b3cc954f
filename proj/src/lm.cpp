#include "groupprof/lm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace groupprof {

namespace {

bool is_token_byte(unsigned char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 sequences; keep them so
  // non-ASCII words survive as single tokens.
  return std::isalnum(c) || c >= 0x80;
}

std::size_t codepoints(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

bool all_digits(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    std::string token;
    token.swap(current);
    if (codepoints(token) < 2) return;
    if (all_digits(token)) return;
    if (is_stopword(token)) return;
    tokens.push_back(std::move(token));
  };
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::map<std::string, double> term_frequencies(std::string_view text) {
  std::map<std::string, double> tf;
  for (auto& t : tokenize(text)) tf[t] += 1.0;
  return tf;
}

double TermDistribution::prob(const std::string& term) const {
  auto it = entries.find(term);
  return it == entries.end() ? 0.0 : it->second;
}

double TermDistribution::sum() const {
  double s = 0.0;
  for (const auto& [t, p] : entries) s += p;
  return s;
}

TermDistribution TermDistribution::normalized(const std::map<std::string, double>& weights) {
  double total = 0.0;
  for (const auto& [t, w] : weights) {
    if (w < 0.0) throw Error("negative weight for term \"" + t + "\"");
    total += w;
  }
  if (!(total > 0.0)) throw Error("cannot normalize: total weight is not positive");
  TermDistribution dist;
  for (const auto& [t, w] : weights)
    if (w > 0.0) dist.entries[t] = w / total;
  return dist;
}

void TermDistribution::write_tsv(std::ostream& out) const {
  std::vector<std::pair<std::string, double>> rows(entries.begin(), entries.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  char buf[64];
  for (const auto& [t, p] : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    out << t << '\t' << buf << '\n';
  }
}

TermDistribution TermDistribution::read_tsv(std::istream& in) {
  TermDistribution dist;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("distribution TSV line " + std::to_string(lineno) + ": missing tab");
    std::string term = line.substr(0, tab);
    double p = 0.0;
    try {
      p = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw Error("distribution TSV line " + std::to_string(lineno) + ": bad probability");
    }
    if (p < 0.0)
      throw Error("distribution TSV line " + std::to_string(lineno) + ": negative probability");
    if (p > 0.0) dist.entries[term] = p;
  }
  return dist;
}

CollectionScope collection_scope_from_string(const std::string& name) {
  if (name == "all") return CollectionScope::all;
  if (name == "preferences") return CollectionScope::preferences;
  if (name == "candidates") return CollectionScope::candidates;
  throw Error("unknown collection scope: " + name);
}

TermDistribution build_collection_model(const std::vector<std::string>& documents) {
  if (documents.empty()) throw Error("collection model requires at least one document");
  std::map<std::string, double> counts;
  for (const auto& doc : documents)
    for (auto& t : tokenize(doc)) counts[t] += 1.0;
  if (counts.empty()) throw Error("collection model: no terms survive tokenization");
  return TermDistribution::normalized(counts);
}

TermDistribution build_collection_model(const Corpus& corpus, CollectionScope scope) {
  std::vector<std::string> docs;
  if (scope == CollectionScope::all || scope == CollectionScope::preferences)
    for (const auto& u : corpus.users)
      for (const auto& p : u.preferences) docs.push_back(p.text);
  if (scope == CollectionScope::all || scope == CollectionScope::candidates)
    for (const auto& c : corpus.candidates) docs.push_back(c.text);
  return build_collection_model(docs);
}

UserModel build_user_model(const UserRecord& user, int relevance_threshold) {
  UserModel m;
  m.user_id = user.user_id;
  for (const auto& doc : user.preferences) {
    if (doc.rating <= relevance_threshold) continue;
    for (auto& t : tokenize(doc.text)) m.counts[t] += static_cast<double>(doc.rating);
  }
  if (m.counts.empty()) {
    m.cold_start = true;
  } else {
    m.lm = TermDistribution::normalized(m.counts);
  }
  return m;
}

UserModel build_user_model_truncated(const UserRecord& user, int relevance_threshold,
                                     std::size_t max_tokens) {
  UserModel m;
  m.user_id = user.user_id;
  std::size_t used = 0;
  for (const auto& doc : user.preferences) {
    if (doc.rating <= relevance_threshold) continue;
    for (auto& t : tokenize(doc.text)) {
      if (used >= max_tokens) break;
      m.counts[t] += static_cast<double>(doc.rating);
      ++used;
    }
    if (used >= max_tokens) break;
  }
  if (m.counts.empty()) {
    m.cold_start = true;
  } else {
    m.lm = TermDistribution::normalized(m.counts);
  }
  return m;
}

DocScore score_document(const CandidateDocument& doc, const TermDistribution& model,
                        const TermDistribution& background, double jm_lambda) {
  if (background.empty()) throw Error("score_document: empty background model");
  if (!(jm_lambda > 0.0) || !(jm_lambda < 1.0))
    throw Error("score_document: jm_lambda must lie in (0, 1)");
  DocScore result;
  for (const auto& [term, tf] : term_frequencies(doc.text)) {
    double p_bg = background.prob(term);
    if (p_bg <= 0.0) {
      ++result.oov_terms;
      continue;
    }
    double p = jm_lambda * model.prob(term) + (1.0 - jm_lambda) * p_bg;
    result.log_prob += tf * std::log(p);
    ++result.scored_terms;
  }
  return result;
}

}  // namespace groupprof
