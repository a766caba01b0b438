#ifndef DAVOC_COMMON_ERROR_H_
#define DAVOC_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace davoc {

// Broad failure classes. The CLI maps each one to its own exit code.
enum class ErrorKind {
  kConfig,
  kData,
  kNumeric,
  kThreshold,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ConfigError(const std::string& what) {
  return Error(ErrorKind::kConfig, what);
}
inline Error DataError(const std::string& what) {
  return Error(ErrorKind::kData, what);
}
inline Error NumericError(const std::string& what) {
  return Error(ErrorKind::kNumeric, what);
}

}  // namespace davoc

#endif  // DAVOC_COMMON_ERROR_H_
