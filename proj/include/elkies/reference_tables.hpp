#pragma once

#include <string_view>

// Published constant tables, verbatim. One row per line, cells separated by a
// single space; rows X0 = 10, 2^4, ..., 2^11; columns m0 = 3, 2^2, ..., 2^11.

namespace elkies::reference {

inline constexpr std::string_view c1_table = "0.629 0.507 0.048 0.047 0.047 0.047 0.047 0.047 0.047";

inline constexpr std::string_view c2_odd_table =
R"(3.475 2.993 2.379 2.072 1.888 1.766 1.678 1.612 1.561 1.520 1.487
3.051 2.632 2.099 1.832 1.672 1.565 1.489 1.432 1.387 1.352 1.323
2.621 2.267 1.816 1.591 1.455 1.365 1.301 1.252 1.215 1.185 1.160
2.335 2.025 1.629 1.431 1.313 1.233 1.177 1.134 1.101 1.075 1.054
2.140 1.859 1.501 1.323 1.215 1.144 1.093 1.054 1.025 1.001 0.981
2.003 1.743 1.413 1.247 1.148 1.082 1.035 0.999 0.972 0.949 0.931
1.908 1.663 1.350 1.194 1.101 1.038 0.994 0.960 0.934 0.914 0.897
1.840 1.606 1.307 1.157 1.068 1.008 0.965 0.933 0.908 0.888 0.872
1.793 1.565 1.276 1.131 1.044 0.986 0.945 0.914 0.890 0.870 0.855)";

inline constexpr std::string_view c2_even_table =
R"(3.850 3.290 2.577 2.221 2.007 1.865 1.763 1.686 1.627 1.580 1.541
3.455 2.952 2.312 1.992 1.800 1.672 1.580 1.512 1.458 1.416 1.381
3.018 2.582 2.026 1.748 1.581 1.470 1.390 1.331 1.284 1.247 1.217
2.695 2.309 1.819 1.574 1.426 1.328 1.258 1.206 1.165 1.132 1.105
2.449 2.104 1.665 1.445 1.314 1.226 1.163 1.116 1.079 1.050 1.026
2.262 1.948 1.549 1.350 1.230 1.150 1.093 1.050 1.017 0.990 0.969
2.118 1.830 1.462 1.278 1.168 1.094 1.041 1.002 0.971 0.947 0.927
2.009 1.739 1.396 1.224 1.121 1.052 1.003 0.967 0.938 0.915 0.896
1.926 1.671 1.346 1.184 1.086 1.021 0.975 0.940 0.913 0.892 0.874)";

}  // namespace elkies::reference
