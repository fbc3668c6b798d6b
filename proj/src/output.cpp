#include "dvlae/output.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "dvlae/error.hpp"

namespace dvlae {

namespace fs = std::filesystem;

OutputTransaction::~OutputTransaction() {
  if (committed_) return;
  for (const auto& tmp : temporaries_) {
    std::error_code ec;
    fs::remove(tmp, ec);
  }
}

void OutputTransaction::stage(const fs::path& destination, std::string_view contents) {
  if (committed_) throw std::logic_error("output transaction already committed");
  if (destination.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(destination.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + destination.parent_path().string() + "'");
  }
  fs::path tmp = destination;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(temporaries_.size());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    temporaries_.push_back(tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  destinations_.push_back(destination);
}

void OutputTransaction::commit() {
  for (std::size_t i = 0; i < temporaries_.size(); ++i) {
    std::error_code ec;
    fs::rename(temporaries_[i], destinations_[i], ec);
    if (ec) throw Error("cannot move output into place at '" + destinations_[i].string() + "'");
  }
  committed_ = true;
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  OutputTransaction tx;
  tx.stage(path, contents);
  tx.commit();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace dvlae
