#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dvlae {

/// Stages output files next to their destinations and renames them into
/// place on commit(). Anything not committed is deleted when the
/// transaction is destroyed, so a failed command leaves no partial files.
class OutputTransaction {
 public:
  OutputTransaction() = default;
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;
  ~OutputTransaction();

  void stage(const std::filesystem::path& destination, std::string_view contents);
  void commit();

  const std::vector<std::filesystem::path>& destinations() const noexcept { return destinations_; }

 private:
  std::vector<std::filesystem::path> temporaries_;
  std::vector<std::filesystem::path> destinations_;
  bool committed_ = false;
};

/// Single-file convenience wrapper.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace dvlae
