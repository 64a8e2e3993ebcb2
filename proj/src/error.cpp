#include "recam/error.hpp"

#include <sstream>

namespace recam {

int Error::exit_code() const {
  switch (kind_) {
    case ErrorKind::kUsage:
      return 2;
    case ErrorKind::kResource:
      return 3;
    case ErrorKind::kDivergence:
      return 5;
    default:
      return 4;
  }
}

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : Error(ErrorKind::kParse, file + ":" + std::to_string(line) + ": " + what),
      file_(file),
      line_(line) {}

static std::string DivergenceMessage(int epoch, int batch, double loss) {
  std::ostringstream os;
  os << "training diverged at epoch " << epoch << ", batch " << batch << " (loss " << loss << ")";
  return os.str();
}

DivergenceError::DivergenceError(int epoch, int batch, double loss)
    : Error(ErrorKind::kDivergence, DivergenceMessage(epoch, batch, loss)),
      epoch_(epoch),
      batch_(batch) {}

}  // namespace recam
