#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bvm {

// Round-trippable text form; results files must be byte-stable across reruns.
std::string format_double(double x);

// CSV with '#'-prefixed comment headers. Volatile metadata (timestamps)
// belongs in comments so the body stays byte-identical under a fixed seed.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

}  // namespace bvm
