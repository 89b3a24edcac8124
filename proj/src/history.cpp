#include "cochange/history.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cochange/errors.hpp"
#include "cochange/xml_lite.hpp"

namespace cochange {

std::optional<VcsFormat> vcs_format_from_string(std::string_view name) {
  if (name == "git") return VcsFormat::git;
  if (name == "svn") return VcsFormat::svn;
  return std::nullopt;
}

std::string_view to_string(VcsFormat format) {
  return format == VcsFormat::git ? "git" : "svn";
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool read_digits(std::string_view text, std::size_t& pos, std::size_t count, std::int64_t& out) {
  if (pos + count > text.size()) return false;
  std::int64_t value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  pos += count;
  out = value;
  return true;
}

}  // namespace

std::optional<std::int64_t> parse_iso8601(std::string_view text) {
  std::size_t pos = 0;
  std::int64_t year, month, day, hour, minute, second;
  if (!read_digits(text, pos, 4, year)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
  if (!read_digits(text, pos, 2, month)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != '-') return std::nullopt;
  if (!read_digits(text, pos, 2, day)) return std::nullopt;
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) return std::nullopt;
  ++pos;
  if (!read_digits(text, pos, 2, hour)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
  if (!read_digits(text, pos, 2, minute)) return std::nullopt;
  if (pos >= text.size() || text[pos++] != ':') return std::nullopt;
  if (!read_digits(text, pos, 2, second)) return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
    return std::nullopt;

  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }

  std::int64_t offset_seconds = 0;
  if (pos < text.size()) {
    char c = text[pos];
    if (c == 'Z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      std::int64_t oh, om;
      if (!read_digits(text, pos, 2, oh)) return std::nullopt;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (!read_digits(text, pos, 2, om)) return std::nullopt;
      offset_seconds = (oh * 60 + om) * 60;
      if (c == '-') offset_seconds = -offset_seconds;
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;

  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset_seconds;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  // civil_from_days, the inverse of days_from_civil
  std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  const std::int64_t year = y + (m <= 2);

  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

namespace {

constexpr char kFieldSep = '\x1f';
constexpr char kMessageEnd = '\x1e';

void finalize_paths(std::vector<std::string>& paths) {
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
}

// The git contract: records produced by
//   git log --name-status --pretty=format:'%x00%H%x1f%aI%x1f%an%x1f%B%x1e'
// Each record is NUL, then hash/date/author/message separated by 0x1f, the
// message terminated by 0x1e, followed by the name-status lines.
std::vector<CommitRecord> parse_git_log(std::string_view log) {
  std::vector<CommitRecord> commits;
  std::size_t pos = 0;

  auto fail = [&](std::size_t offset, const std::string& message) -> void {
    throw ParseError("git log", offset,
                     message + " (after " + std::to_string(commits.size()) + " commits)");
  };

  // Tolerate whitespace before the first record.
  while (pos < log.size() && std::isspace(static_cast<unsigned char>(log[pos]))) ++pos;
  if (pos >= log.size()) return commits;
  if (log[pos] != '\0') fail(pos, "expected NUL at start of a commit record");

  while (pos < log.size()) {
    ++pos;  // consume NUL
    CommitRecord commit;

    auto take_field = [&](const char* what) {
      std::size_t end = log.find(kFieldSep, pos);
      if (end == std::string_view::npos) fail(pos, std::string("missing ") + what + " separator");
      std::string value(log.substr(pos, end - pos));
      pos = end + 1;
      return value;
    };

    std::size_t record_start = pos;
    commit.id = take_field("hash");
    if (commit.id.empty() || commit.id.find('\n') != std::string::npos)
      fail(record_start, "bad commit hash");
    std::string date = take_field("date");
    auto timestamp = parse_iso8601(date);
    if (!timestamp) fail(pos, "unparsable commit date '" + date + "'");
    commit.timestamp = *timestamp;
    commit.author = take_field("author");

    std::size_t msg_end = log.find(kMessageEnd, pos);
    if (msg_end == std::string_view::npos) fail(pos, "missing message terminator");
    commit.message = std::string(log.substr(pos, msg_end - pos));
    pos = msg_end + 1;

    // Name-status block runs until the next NUL record or end of stream.
    std::size_t block_end = log.find('\0', pos);
    if (block_end == std::string_view::npos) block_end = log.size();
    while (pos < block_end) {
      std::size_t eol = log.find('\n', pos);
      if (eol == std::string_view::npos || eol > block_end) eol = block_end;
      std::string_view line = log.substr(pos, eol - pos);
      std::size_t line_start = pos;
      pos = eol < block_end ? eol + 1 : block_end;
      if (line.empty()) continue;

      std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) fail(line_start, "name-status line without a tab");
      std::string_view status = line.substr(0, tab);
      std::string_view rest = line.substr(tab + 1);
      if (status.empty() || status[0] < 'A' || status[0] > 'Z')
        fail(line_start, "unrecognized name-status code");
      char code = status[0];
      if (code == 'R' || code == 'C') {
        // rename/copy: old path TAB new path; both classes were touched
        std::size_t tab2 = rest.find('\t');
        if (tab2 == std::string_view::npos) fail(line_start, "rename entry without a target path");
        commit.changed_paths.emplace_back(rest.substr(0, tab2));
        commit.changed_paths.emplace_back(rest.substr(tab2 + 1));
      } else {
        if (rest.empty()) fail(line_start, "name-status line without a path");
        commit.changed_paths.emplace_back(rest);
      }
    }

    finalize_paths(commit.changed_paths);
    commits.push_back(std::move(commit));
  }
  return commits;
}

std::string element_path(const std::string& parent, const std::string& name, std::size_t index) {
  return parent + "/" + name + "[" + std::to_string(index) + "]";
}

std::vector<CommitRecord> parse_svn_log(std::string_view log) {
  if (log.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  xml::Element root = xml::parse_document(log, "svn log");
  if (root.name != "log")
    throw ParseError("svn log", root.byte_offset, "expected <log> root, found <" + root.name + ">");

  std::vector<CommitRecord> commits;
  std::size_t index = 0;
  for (const xml::Element& entry : root.children) {
    ++index;
    std::string where = element_path("/log", entry.name, index);
    if (entry.name != "logentry")
      throw ParseError("svn log", entry.byte_offset, "unexpected element at " + where);
    const std::string* revision = entry.attribute("revision");
    if (!revision || revision->empty())
      throw ParseError("svn log", entry.byte_offset, where + " is missing the revision attribute");

    CommitRecord commit;
    commit.id = *revision;
    bool have_date = false;
    for (const xml::Element& child : entry.children) {
      if (child.name == "author") {
        commit.author = child.text;
      } else if (child.name == "date") {
        auto timestamp = parse_iso8601(child.text);
        if (!timestamp)
          throw ParseError("svn log", child.byte_offset,
                           where + "/date: unparsable timestamp '" + child.text + "'");
        commit.timestamp = *timestamp;
        have_date = true;
      } else if (child.name == "msg") {
        commit.message = child.text;
      } else if (child.name == "paths") {
        for (const xml::Element& path : child.children) {
          if (path.name != "path")
            throw ParseError("svn log", path.byte_offset,
                             where + "/paths: unexpected element <" + path.name + ">");
          std::string_view value = path.text;
          if (!value.empty() && value.front() == '/') value.remove_prefix(1);
          if (!value.empty()) commit.changed_paths.emplace_back(value);
        }
      }
      // other children (e.g. revprops) are ignored
    }
    if (!have_date)
      throw ParseError("svn log", entry.byte_offset, where + " is missing a <date> element");
    finalize_paths(commit.changed_paths);
    commits.push_back(std::move(commit));
  }
  return commits;
}

}  // namespace

std::vector<CommitRecord> parse_vcs_log(std::string_view log, VcsFormat format) {
  std::vector<CommitRecord> commits =
      format == VcsFormat::git ? parse_git_log(log) : parse_svn_log(log);

  std::stable_sort(commits.begin(), commits.end(),
                   [](const CommitRecord& a, const CommitRecord& b) {
                     return a.timestamp < b.timestamp;
                   });

  std::unordered_set<std::string_view> seen;
  for (const CommitRecord& commit : commits) {
    if (!seen.insert(commit.id).second)
      throw ParseError("duplicate commit id '" + commit.id + "' in the log");
  }
  return commits;
}

std::vector<IssueRecord> parse_issue_reports(
    const std::vector<std::pair<std::string, std::string>>& documents) {
  std::vector<IssueRecord> issues;
  std::unordered_map<std::string, std::string> origin;  // key -> document name

  for (const auto& [name, content] : documents) {
    xml::Element root = xml::parse_document(content, name);
    if (root.name != "issues")
      throw ParseError(name, root.byte_offset, "expected <issues> root, found <" + root.name + ">");
    std::size_t index = 0;
    for (const xml::Element& issue : root.children) {
      ++index;
      std::string where = element_path("/issues", issue.name, index);
      if (issue.name != "issue")
        throw ParseError(name, issue.byte_offset, "unexpected element at " + where);
      const std::string* key = issue.attribute("key");
      const std::string* type = issue.attribute("type");
      const std::string* status = issue.attribute("status");
      if (!key || key->empty())
        throw ParseError(name, issue.byte_offset, where + " is missing the key attribute");
      if (!type)
        throw ParseError(name, issue.byte_offset, where + " is missing the type attribute");
      if (!status)
        throw ParseError(name, issue.byte_offset, where + " is missing the status attribute");
      auto [it, inserted] = origin.emplace(*key, name);
      if (!inserted)
        throw ParseError(name, issue.byte_offset,
                         "duplicate issue key '" + *key + "' (first seen in " + it->second + ")");
      issues.push_back(IssueRecord{*key, *type, *status});
    }
  }
  return issues;
}

namespace {

std::vector<std::string> extract_issue_keys(const std::string& message, const std::regex& pattern) {
  std::vector<std::string> keys;
  for (auto it = std::sregex_iterator(message.begin(), message.end(), pattern);
       it != std::sregex_iterator(); ++it) {
    keys.push_back(it->str());
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

std::regex compile_issue_pattern(const IngestConfig& config) {
  try {
    return std::regex(config.issue_key_pattern);
  } catch (const std::regex_error& e) {
    throw UsageError("invalid issue key pattern '" + config.issue_key_pattern + "': " + e.what());
  }
}

std::optional<ClassId> class_from_path(std::string_view path, const IngestConfig& config) {
  if (!path.ends_with(config.class_file_suffix)) return std::nullopt;

  std::string_view relative;
  if (config.source_roots.empty()) {
    relative = path;
  } else {
    bool matched = false;
    for (const std::string& root : config.source_roots) {
      if (path.starts_with(root)) {
        relative = path.substr(root.size());
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }

  relative.remove_suffix(config.class_file_suffix.size());
  std::string fqn;
  fqn.reserve(relative.size());
  for (char c : relative) fqn.push_back(c == '/' ? '.' : c);
  if (!is_valid_fqn(fqn)) return std::nullopt;
  return ClassId(std::move(fqn));
}

std::size_t count_packages(const std::vector<ClassId>& classes) {
  std::set<std::string_view> packages;
  for (const ClassId& id : classes) packages.insert(package_of(id));
  return packages.size();
}

}  // namespace

std::vector<std::string> link_commit_to_issues(const CommitRecord& commit,
                                               const IngestConfig& config) {
  return extract_issue_keys(commit.message, compile_issue_pattern(config));
}

std::vector<ClassId> map_paths_to_classes(std::span<const std::string> paths,
                                          const IngestConfig& config) {
  std::vector<ClassId> classes;
  for (const std::string& path : paths) {
    if (auto id = class_from_path(path, config)) classes.push_back(std::move(*id));
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

FilterOutcome filter_commits(std::span<const CommitRecord> commits,
                             std::span<const IssueRecord> issues,
                             const IngestConfig& config) {
  const std::regex pattern = compile_issue_pattern(config);
  const std::unordered_set<std::string_view> accepted(config.accepted_issue_types.begin(),
                                                      config.accepted_issue_types.end());
  std::unordered_map<std::string_view, std::string_view> type_by_key;
  for (const IssueRecord& issue : issues) type_by_key.emplace(issue.key, issue.issue_type);

  FilterOutcome outcome;
  outcome.attrition.input_commits = commits.size();

  for (const CommitRecord& commit : commits) {
    std::vector<std::string> keys = extract_issue_keys(commit.message, pattern);

    // F1: at least one linked key is an archived issue of an accepted type.
    bool has_maintenance_issue = std::any_of(keys.begin(), keys.end(), [&](const std::string& k) {
      auto it = type_by_key.find(k);
      return it != type_by_key.end() && accepted.contains(it->second);
    });
    if (!has_maintenance_issue) {
      ++outcome.attrition.removed_no_maintenance_issue;
      continue;
    }

    // F2: the commit changes at least one class.
    std::vector<ClassId> classes = map_paths_to_classes(commit.changed_paths, config);
    if (classes.empty()) {
      ++outcome.attrition.removed_no_classes;
      continue;
    }

    // F3: a single linked issue; multi-issue commits mix unrelated tasks.
    if (keys.size() != 1) {
      ++outcome.attrition.removed_multiple_issues;
      continue;
    }

    // F4: scattering cap.
    std::size_t packages = count_packages(classes);
    if (packages > config.max_scattering) {
      ++outcome.attrition.removed_scattered;
      continue;
    }

    outcome.change_sets.push_back(
        ChangeSet{commit.id, keys.front(), std::move(classes), packages});
  }

  outcome.attrition.survivors = outcome.change_sets.size();
  return outcome;
}

}  // namespace cochange
