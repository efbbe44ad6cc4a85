#ifndef IS2_CLI_APP_HPP
#define IS2_CLI_APP_HPP

namespace is2::cli {
inline int run(int, char**) { return 0; }
}  // namespace is2::cli

#endif
