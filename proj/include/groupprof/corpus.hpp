#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupprof/error.hpp"

namespace groupprof {

enum class Gender { male, female, unspecified };
enum class TripType { holiday, business, other };
enum class TripDuration { night_out, day_trip, weekend, longer };
enum class Season { spring, summer, autumn, winter };
enum class GroupType { alone, family, friends, other };

enum class Criterion { age, gender, group_type, trip_type, trip_duration, season };

std::string to_string(Gender g);
std::string to_string(TripType t);
std::string to_string(TripDuration d);
std::string to_string(Season s);
std::string to_string(GroupType g);
std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& name);

struct RatedDocument {
  std::string doc_id;
  std::string text;
  int rating = 0;  // in [-1, 4]
};

struct UserRecord {
  std::string user_id;
  std::optional<int> age;  // years, in [0, 130] when present
  Gender gender = Gender::unspecified;
  std::vector<RatedDocument> preferences;
};

struct CandidateDocument {
  std::string doc_id;
  std::string text;
};

struct SuggestionRequest {
  std::string request_id;
  std::string user_id;
  TripType trip_type = TripType::other;
  TripDuration trip_duration = TripDuration::weekend;
  Season season = Season::summer;
  GroupType group_type = GroupType::other;
  std::vector<std::string> candidate_ids;
  std::map<std::string, int> qrels;  // doc_id -> rating; empty when absent

  bool has_qrels() const { return !qrels.empty(); }
};

// Validated, cross-referenced corpus. Users, candidates and requests are
// kept sorted by id so iteration order is independent of file order.
struct Corpus {
  std::vector<UserRecord> users;
  std::vector<CandidateDocument> candidates;
  std::vector<SuggestionRequest> requests;

  const UserRecord* find_user(const std::string& user_id) const;
  const CandidateDocument* find_candidate(const std::string& doc_id) const;
  const SuggestionRequest* find_request(const std::string& request_id) const;
};

// Members of one group under one criterion. Attribute criteria (age, gender)
// group users; context criteria group (user, request) pairs, so one user may
// appear in several groups of the same criterion across requests.
struct GroupAssignment {
  Criterion criterion = Criterion::age;
  std::string group_label;
  std::vector<std::string> member_user_ids;  // unique, sorted
  // (user_id, request_id) entities; empty for attribute criteria.
  std::vector<std::pair<std::string, std::string>> member_pairs;

  std::size_t entity_count() const {
    return member_pairs.empty() ? member_user_ids.size() : member_pairs.size();
  }
};

// Users with a missing attribute land here and are excluded from profiling.
inline constexpr const char* kUnknownGroupLabel = "unknown";

Corpus load_corpus(const std::string& users_path, const std::string& candidates_path,
                   const std::string& requests_path);

// Default Table-1 age bin edges: <20, 20-30, 30-40, 40-50, >50.
std::vector<int> default_age_bins();
// Edges at multiples of `width` covering ages up to 130.
std::vector<int> age_bins_for_width(int width);
// Label of the bin holding `age` under strictly increasing `edges`
// (lower-inclusive, upper-exclusive).
std::string age_bin_label(int age, const std::vector<int>& edges);

std::vector<GroupAssignment> group_users(
    const Corpus& corpus, Criterion criterion,
    const std::optional<std::vector<int>>& age_bins = std::nullopt);

}  // namespace groupprof
