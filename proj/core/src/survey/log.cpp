#include "percolor/survey/log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "percolor/error.hpp"

namespace percolor::survey {
namespace {

std::string errno_text() { return std::strerror(errno); }

}  // namespace

AppendLog::AppendLog(std::filesystem::path path) : path_(std::move(path)) {
  std::string content;
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw IoError("cannot read log '" + path_.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    content = buf.str();
  }
  const auto last_newline = content.rfind('\n');
  const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (complete != content.size()) {
    // Torn write from a crash mid-append; the record was never acknowledged.
    std::filesystem::resize_file(path_, complete);
  }
  std::size_t start = 0;
  while (start < complete) {
    const auto nl = content.find('\n', start);
    if (nl > start) replayed_.emplace_back(content, start, nl - start);
    start = nl + 1;
  }

  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw IoError("cannot open log '" + path_.string() + "': " + errno_text());
}

AppendLog::~AppendLog() {
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
  }
}

void AppendLog::append(std::string_view line) {
  if (line.find('\n') != std::string_view::npos) throw UsageError("log record contains a newline");
  std::string record(line);
  record += '\n';
  std::lock_guard lock(mutex_);
  const ssize_t n = ::write(fd_, record.data(), record.size());
  if (n != static_cast<ssize_t>(record.size())) {
    throw IoError("short write to '" + path_.string() + "': " + errno_text());
  }
  if (::fdatasync(fd_) != 0) throw IoError("sync failed for '" + path_.string() + "': " + errno_text());
}

std::vector<std::string> AppendLog::read_all() const {
  std::lock_guard lock(mutex_);
  std::ifstream in(path_);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace percolor::survey
