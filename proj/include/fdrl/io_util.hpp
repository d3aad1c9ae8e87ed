#pragma once

#include <fstream>
#include <string>

namespace fdrl {

/// Writes to "<path>.tmp" and renames into place on commit, so readers never
/// observe a half-written file. Discards on destruction if not committed.
class AtomicFile {
 public:
  explicit AtomicFile(const std::string& path);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ofstream& stream() { return out_; }
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string read_text_file(const std::string& path);  // throws on failure

}  // namespace fdrl
