#include "groupprof/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace groupprof {

using nlohmann::json;

std::string to_string(Gender g) {
  switch (g) {
    case Gender::male: return "male";
    case Gender::female: return "female";
    case Gender::unspecified: return "unspecified";
  }
  return "unspecified";
}

std::string to_string(TripType t) {
  switch (t) {
    case TripType::holiday: return "holiday";
    case TripType::business: return "business";
    case TripType::other: return "other";
  }
  return "other";
}

std::string to_string(TripDuration d) {
  switch (d) {
    case TripDuration::night_out: return "night_out";
    case TripDuration::day_trip: return "day_trip";
    case TripDuration::weekend: return "weekend";
    case TripDuration::longer: return "longer";
  }
  return "weekend";
}

std::string to_string(Season s) {
  switch (s) {
    case Season::spring: return "spring";
    case Season::summer: return "summer";
    case Season::autumn: return "autumn";
    case Season::winter: return "winter";
  }
  return "summer";
}

std::string to_string(GroupType g) {
  switch (g) {
    case GroupType::alone: return "alone";
    case GroupType::family: return "family";
    case GroupType::friends: return "friends";
    case GroupType::other: return "other";
  }
  return "other";
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::age: return "age";
    case Criterion::gender: return "gender";
    case Criterion::group_type: return "group_type";
    case Criterion::trip_type: return "trip_type";
    case Criterion::trip_duration: return "trip_duration";
    case Criterion::season: return "season";
  }
  return "age";
}

Criterion criterion_from_string(const std::string& name) {
  if (name == "age") return Criterion::age;
  if (name == "gender") return Criterion::gender;
  if (name == "group_type") return Criterion::group_type;
  if (name == "trip_type") return Criterion::trip_type;
  if (name == "trip_duration") return Criterion::trip_duration;
  if (name == "season") return Criterion::season;
  throw Error("unknown grouping criterion: " + name);
}

namespace {

std::string location(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

Gender parse_gender(const std::string& s, const std::string& where) {
  if (s == "male") return Gender::male;
  if (s == "female") return Gender::female;
  if (s == "unspecified") return Gender::unspecified;
  throw Error(where + ": invalid gender \"" + s + "\"");
}

TripType parse_trip_type(const std::string& s, const std::string& where) {
  if (s == "holiday") return TripType::holiday;
  if (s == "business") return TripType::business;
  if (s == "other") return TripType::other;
  throw Error(where + ": invalid trip_type \"" + s + "\"");
}

TripDuration parse_trip_duration(const std::string& s, const std::string& where) {
  if (s == "night_out") return TripDuration::night_out;
  if (s == "day_trip") return TripDuration::day_trip;
  if (s == "weekend") return TripDuration::weekend;
  if (s == "longer") return TripDuration::longer;
  throw Error(where + ": invalid trip_duration \"" + s + "\"");
}

Season parse_season(const std::string& s, const std::string& where) {
  if (s == "spring") return Season::spring;
  if (s == "summer") return Season::summer;
  if (s == "autumn") return Season::autumn;
  if (s == "winter") return Season::winter;
  throw Error(where + ": invalid season \"" + s + "\"");
}

GroupType parse_group_type(const std::string& s, const std::string& where) {
  if (s == "alone") return GroupType::alone;
  if (s == "family") return GroupType::family;
  if (s == "friends") return GroupType::friends;
  if (s == "other") return GroupType::other;
  throw Error(where + ": invalid group_type \"" + s + "\"");
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    throw Error(where + ": missing or non-string field \"" + std::string(key) + "\"");
  return j[key].get<std::string>();
}

int require_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw Error(where + ": missing or non-integer field \"" + std::string(key) + "\"");
  return j[key].get<int>();
}

// Applies fn to each non-empty line; reports parse failures with file:line.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(location(path, lineno) + ": malformed JSON: " + e.what());
    }
    fn(obj, location(path, lineno));
  }
}

UserRecord parse_user(const json& j, const std::string& where) {
  UserRecord u;
  u.user_id = require_string(j, "user_id", where);
  if (u.user_id.empty()) throw Error(where + ": empty user_id");
  if (j.contains("age") && !j["age"].is_null()) {
    if (!j["age"].is_number_integer()) throw Error(where + ": non-integer age");
    int age = j["age"].get<int>();
    if (age < 0 || age > 130)
      throw Error(where + ": age " + std::to_string(age) + " out of [0, 130]");
    u.age = age;
  }
  if (j.contains("gender") && !j["gender"].is_null())
    u.gender = parse_gender(j["gender"].get<std::string>(), where);
  if (j.contains("preferences")) {
    if (!j["preferences"].is_array()) throw Error(where + ": preferences must be an array");
    for (const auto& p : j["preferences"]) {
      RatedDocument d;
      d.doc_id = require_string(p, "doc_id", where);
      if (d.doc_id.empty()) throw Error(where + ": empty preference doc_id");
      d.text = require_string(p, "text", where);
      d.rating = require_int(p, "rating", where);
      if (d.rating < -1 || d.rating > 4)
        throw Error(where + ": rating " + std::to_string(d.rating) + " out of [-1, 4]");
      u.preferences.push_back(std::move(d));
    }
  }
  return u;
}

}  // namespace

const UserRecord* Corpus::find_user(const std::string& user_id) const {
  auto it = std::lower_bound(users.begin(), users.end(), user_id,
                             [](const UserRecord& u, const std::string& id) {
                               return u.user_id < id;
                             });
  if (it != users.end() && it->user_id == user_id) return &*it;
  return nullptr;
}

const CandidateDocument* Corpus::find_candidate(const std::string& doc_id) const {
  auto it = std::lower_bound(candidates.begin(), candidates.end(), doc_id,
                             [](const CandidateDocument& c, const std::string& id) {
                               return c.doc_id < id;
                             });
  if (it != candidates.end() && it->doc_id == doc_id) return &*it;
  return nullptr;
}

const SuggestionRequest* Corpus::find_request(const std::string& request_id) const {
  auto it = std::lower_bound(requests.begin(), requests.end(), request_id,
                             [](const SuggestionRequest& r, const std::string& id) {
                               return r.request_id < id;
                             });
  if (it != requests.end() && it->request_id == request_id) return &*it;
  return nullptr;
}

Corpus load_corpus(const std::string& users_path, const std::string& candidates_path,
                   const std::string& requests_path) {
  Corpus corpus;

  std::set<std::string> user_ids;
  for_each_jsonl(users_path, [&](const json& j, const std::string& where) {
    UserRecord u = parse_user(j, where);
    if (!user_ids.insert(u.user_id).second)
      throw Error(where + ": duplicate user_id \"" + u.user_id + "\"");
    corpus.users.push_back(std::move(u));
  });

  std::set<std::string> candidate_ids;
  for_each_jsonl(candidates_path, [&](const json& j, const std::string& where) {
    CandidateDocument c;
    c.doc_id = require_string(j, "doc_id", where);
    if (c.doc_id.empty()) throw Error(where + ": empty doc_id");
    c.text = require_string(j, "text", where);
    if (c.text.empty()) throw Error(where + ": empty candidate text");
    if (!candidate_ids.insert(c.doc_id).second)
      throw Error(where + ": duplicate candidate doc_id \"" + c.doc_id + "\"");
    corpus.candidates.push_back(std::move(c));
  });

  std::set<std::string> request_ids;
  for_each_jsonl(requests_path, [&](const json& j, const std::string& where) {
    SuggestionRequest r;
    r.request_id = require_string(j, "request_id", where);
    if (r.request_id.empty()) throw Error(where + ": empty request_id");
    r.user_id = require_string(j, "user_id", where);
    r.trip_type = parse_trip_type(require_string(j, "trip_type", where), where);
    r.trip_duration = parse_trip_duration(require_string(j, "trip_duration", where), where);
    r.season = parse_season(require_string(j, "season", where), where);
    r.group_type = parse_group_type(require_string(j, "group_type", where), where);
    if (!j.contains("candidate_ids") || !j["candidate_ids"].is_array() ||
        j["candidate_ids"].empty())
      throw Error(where + ": candidate_ids missing or empty");
    for (const auto& id : j["candidate_ids"]) {
      if (!id.is_string()) throw Error(where + ": non-string candidate id");
      r.candidate_ids.push_back(id.get<std::string>());
    }
    if (j.contains("qrels") && !j["qrels"].is_null()) {
      if (!j["qrels"].is_object()) throw Error(where + ": qrels must be an object");
      for (const auto& [doc, rating] : j["qrels"].items()) {
        if (!rating.is_number_integer()) throw Error(where + ": non-integer qrel rating");
        r.qrels[doc] = rating.get<int>();
      }
    }
    if (!request_ids.insert(r.request_id).second)
      throw Error(where + ": duplicate request_id \"" + r.request_id + "\"");
    corpus.requests.push_back(std::move(r));
  });

  std::sort(corpus.users.begin(), corpus.users.end(),
            [](const UserRecord& a, const UserRecord& b) { return a.user_id < b.user_id; });
  std::sort(corpus.candidates.begin(), corpus.candidates.end(),
            [](const CandidateDocument& a, const CandidateDocument& b) {
              return a.doc_id < b.doc_id;
            });
  std::sort(corpus.requests.begin(), corpus.requests.end(),
            [](const SuggestionRequest& a, const SuggestionRequest& b) {
              return a.request_id < b.request_id;
            });

  for (const auto& r : corpus.requests) {
    if (!corpus.find_user(r.user_id))
      throw Error("request " + r.request_id + " references unknown user \"" + r.user_id + "\"");
    for (const auto& id : r.candidate_ids)
      if (!corpus.find_candidate(id))
        throw Error("request " + r.request_id + " references unknown candidate \"" + id + "\"");
    for (const auto& [doc, rating] : r.qrels) {
      (void)rating;
      if (!corpus.find_candidate(doc))
        throw Error("request " + r.request_id + " qrels reference unknown candidate \"" + doc +
                    "\"");
    }
  }
  return corpus;
}

std::vector<int> default_age_bins() { return {20, 30, 40, 50}; }

std::vector<int> age_bins_for_width(int width) {
  if (width <= 0) throw Error("age bin width must be positive");
  std::vector<int> edges;
  for (int e = width; e <= 130; e += width) edges.push_back(e);
  if (edges.empty()) edges.push_back(width);
  return edges;
}

std::string age_bin_label(int age, const std::vector<int>& edges) {
  if (age < edges.front()) return "<" + std::to_string(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (age >= edges[i] && age < edges[i + 1])
      return std::to_string(edges[i]) + "-" + std::to_string(edges[i + 1]);
  return ">" + std::to_string(edges.back());
}

namespace {

std::string context_label(const SuggestionRequest& r, Criterion c) {
  switch (c) {
    case Criterion::trip_type: return to_string(r.trip_type);
    case Criterion::trip_duration: return to_string(r.trip_duration);
    case Criterion::season: return to_string(r.season);
    case Criterion::group_type: return to_string(r.group_type);
    default: throw Error("not a context criterion: " + to_string(c));
  }
}

}  // namespace

std::vector<GroupAssignment> group_users(const Corpus& corpus, Criterion criterion,
                                         const std::optional<std::vector<int>>& age_bins) {
  // label -> (members, pairs); construction order is recorded separately so
  // age bins come out in bin order.
  std::map<std::string, GroupAssignment> groups;
  std::vector<std::string> order;
  auto group_for = [&](const std::string& label) -> GroupAssignment& {
    auto [it, inserted] = groups.try_emplace(label);
    if (inserted) {
      it->second.criterion = criterion;
      it->second.group_label = label;
      order.push_back(label);
    }
    return it->second;
  };

  if (criterion == Criterion::age) {
    std::vector<int> edges = age_bins.value_or(default_age_bins());
    if (edges.empty()) throw Error("age bins must not be empty");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      if (edges[i] >= edges[i + 1]) throw Error("age bins must be strictly increasing");
    // Pre-register bins so the output comes out in edge order.
    std::vector<std::string> bin_order;
    bin_order.push_back("<" + std::to_string(edges.front()));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      bin_order.push_back(std::to_string(edges[i]) + "-" + std::to_string(edges[i + 1]));
    bin_order.push_back(">" + std::to_string(edges.back()));
    for (const auto& label : bin_order) group_for(label);
    for (const auto& u : corpus.users) {
      std::string label = u.age ? age_bin_label(*u.age, edges) : kUnknownGroupLabel;
      if (!u.age)
        std::cerr << "warning: user " << u.user_id
                  << " has no age; assigned to reserved group \"" << kUnknownGroupLabel
                  << "\"\n";
      group_for(label).member_user_ids.push_back(u.user_id);
    }
  } else if (criterion == Criterion::gender) {
    for (const auto& u : corpus.users) {
      std::string label =
          u.gender == Gender::unspecified ? kUnknownGroupLabel : to_string(u.gender);
      if (u.gender == Gender::unspecified)
        std::cerr << "warning: user " << u.user_id
                  << " has unspecified gender; assigned to reserved group \""
                  << kUnknownGroupLabel << "\"\n";
      group_for(label).member_user_ids.push_back(u.user_id);
    }
  } else {
    for (const auto& r : corpus.requests) {
      GroupAssignment& g = group_for(context_label(r, criterion));
      g.member_user_ids.push_back(r.user_id);
      g.member_pairs.emplace_back(r.user_id, r.request_id);
    }
  }

  std::vector<GroupAssignment> result;
  // Age bins in edge order, everything else sorted by label; "unknown" last.
  std::vector<std::string> labels(order);
  if (criterion != Criterion::age) std::sort(labels.begin(), labels.end());
  std::stable_partition(labels.begin(), labels.end(),
                        [](const std::string& l) { return l != kUnknownGroupLabel; });
  for (const auto& label : labels) {
    GroupAssignment g = std::move(groups.at(label));
    if (g.member_user_ids.empty()) continue;  // pre-registered empty bin
    std::sort(g.member_user_ids.begin(), g.member_user_ids.end());
    g.member_user_ids.erase(std::unique(g.member_user_ids.begin(), g.member_user_ids.end()),
                            g.member_user_ids.end());
    std::sort(g.member_pairs.begin(), g.member_pairs.end());
    result.push_back(std::move(g));
  }
  return result;
}

}  // namespace groupprof
