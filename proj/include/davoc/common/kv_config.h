#ifndef DAVOC_COMMON_KV_CONFIG_H_
#define DAVOC_COMMON_KV_CONFIG_H_

#include <map>
#include <string>

namespace davoc {

// `key = value` lines; '#' starts a comment; blank lines are ignored.
// Later keys override earlier ones. Throws ConfigError on a line without '='.
std::map<std::string, std::string> ParseKeyValue(const std::string& text);
std::map<std::string, std::string> ReadKeyValueFile(const std::string& path);

}  // namespace davoc

#endif  // DAVOC_COMMON_KV_CONFIG_H_
