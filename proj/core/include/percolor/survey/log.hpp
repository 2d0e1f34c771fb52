#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace percolor::survey {

/// Append-only, line-delimited record file.
///
/// Each append is a single write() of one LF-terminated line followed by
/// fdatasync, so an acknowledged record survives a crash. Opening replays
/// every complete line; a torn final line (no LF) is truncated away.
class AppendLog {
 public:
  explicit AppendLog(std::filesystem::path path);
  ~AppendLog();

  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  /// Complete lines present when the log was opened, in file order.
  const std::vector<std::string>& replayed() const { return replayed_; }

  /// `line` must not contain a newline. Thread-safe; appends are totally
  /// ordered. Throws IoError on a short write or failed sync.
  void append(std::string_view line);

  /// Every line currently in the file, including ones appended since open.
  std::vector<std::string> read_all() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mutex_;
  std::vector<std::string> replayed_;
};

}  // namespace percolor::survey
