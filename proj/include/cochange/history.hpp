#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cochange/class_id.hpp"

namespace cochange {

enum class VcsFormat { git, svn };

std::optional<VcsFormat> vcs_format_from_string(std::string_view name);
std::string_view to_string(VcsFormat format);

// One commit as extracted from the version control log.
struct CommitRecord {
  std::string id;                         // hash or revision number
  std::int64_t timestamp = 0;             // seconds since the Unix epoch, UTC
  std::string author;
  std::string message;
  std::vector<std::string> changed_paths;  // sorted, no duplicates
};

struct IssueRecord {
  std::string key;
  std::string issue_type;
  std::string status;
};

// A commit that survived all four filters: exactly one maintenance issue and
// a non-empty set of changed classes.
struct ChangeSet {
  std::string commit_id;
  std::string issue_key;
  std::vector<ClassId> classes;      // sorted, no duplicates, never empty
  std::size_t packages_touched = 0;  // distinct packages across `classes`
};

struct IngestConfig {
  std::string issue_key_pattern = "[A-Z][A-Z0-9]*-[0-9]+";
  std::vector<std::string> accepted_issue_types = {"Bug", "Improvement", "Task"};
  std::size_t max_scattering = 10;       // packages; commits above this are dropped
  std::vector<std::string> source_roots;  // path prefixes; empty list means the repository root
  std::string class_file_suffix = ".java";
};

// How many commits each filter removed, attributed in the order F1..F4.
struct FilterAttrition {
  std::size_t input_commits = 0;
  std::size_t removed_no_maintenance_issue = 0;  // F1
  std::size_t removed_no_classes = 0;            // F2
  std::size_t removed_multiple_issues = 0;       // F3
  std::size_t removed_scattered = 0;             // F4
  std::size_t survivors = 0;
};

struct FilterOutcome {
  std::vector<ChangeSet> change_sets;  // chronological order
  FilterAttrition attrition;
};

// Parses an exported log into commit records sorted by timestamp (stable for
// equal timestamps). The git format is the NUL-delimited structured log
// documented in the README; the svn format is `svn log --verbose --xml`.
// Throws ParseError naming the byte offset and the number of commits parsed
// so far on malformed input.
std::vector<CommitRecord> parse_vcs_log(std::string_view log, VcsFormat format);

// Parses issue export documents, given as (source name, content) pairs.
// Throws ParseError on schema violations and on duplicate issue keys.
std::vector<IssueRecord> parse_issue_reports(
    const std::vector<std::pair<std::string, std::string>>& documents);

// Every distinct match of the configured issue pattern in the commit message,
// sorted. No match is a valid outcome.
std::vector<std::string> link_commit_to_issues(const CommitRecord& commit,
                                               const IngestConfig& config);

// Maps file paths to class identities: a path qualifies when it starts with a
// configured source root and ends with the class file suffix; the remainder
// with separators turned into dots must form a valid fqn. Everything else is
// dropped. Deterministic and idempotent.
std::vector<ClassId> map_paths_to_classes(std::span<const std::string> paths,
                                          const IngestConfig& config);

// Applies the four commit filters in order:
//   F1  at least one linked issue key is in the archive with an accepted type
//   F2  the commit changes at least one class
//   F3  the commit links to exactly one issue key
//   F4  the changed classes span at most max_scattering packages
// Input order (chronological) is preserved in the output.
FilterOutcome filter_commits(std::span<const CommitRecord> commits,
                             std::span<const IssueRecord> issues,
                             const IngestConfig& config);

// ISO-8601 timestamp helpers. Accepts `YYYY-MM-DDTHH:MM:SS` with optional
// fractional seconds and an optional zone (`Z`, `+HH:MM` or `+HHMM`).
std::optional<std::int64_t> parse_iso8601(std::string_view text);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

}  // namespace cochange
