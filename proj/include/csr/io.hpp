#ifndef CSR_IO_HPP
#define CSR_IO_HPP

#include <cstdio>
#include <string>

namespace csr {

// Full double precision for CSV/JSON artifacts (17 significant digits).
inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace csr

#endif
