#pragma once

#include <array>

namespace stochint::reference {

// Published coefficient tables. Row r is the second index j_2, column c is j_1.
// Table 1: k=3, j_3 = 3. Table 2: k=4, j_4 = 2, j_3 = 1. Table 3: k=5, j_5 = 1, j_4 = 0, j_3 = 1.
inline constexpr std::array<std::array<const char*, 7>, 7> kTable1 = {{
    {"0", "2/105", "0", "-4/315", "0", "2/693", "0"},
    {"4/105", "0", "-2/315", "0", "-8/3465", "0", "10/9009"},
    {"2/35", "-2/105", "0", "4/3465", "0", "-74/45045", "0"},
    {"2/315", "0", "-2/3465", "0", "16/45045", "0", "-10/9009"},
    {"-2/63", "46/3465", "0", "-32/45045", "0", "2/9009", "0"},
    {"-10/693", "0", "38/9009", "0", "-4/9009", "0", "122/765765"},
    {"0", "-10/3003", "0", "20/9009", "0", "-226/765765", "0"},
}};

inline constexpr std::array<std::array<const char*, 3>, 3> kTable2 = {{
    {"2/21", "-2/45", "2/315"},
    {"2/315", "2/315", "-2/225"},
    {"-2/105", "2/225", "2/1155"},
}};

inline constexpr std::array<std::array<const char*, 2>, 2> kTable3 = {{
    {"4/315", "0"},
    {"4/315", "-8/945"},
}};

struct ErrorConstant {
  const char* name;
  std::array<int, 5> weights;
  int k;
  int p;
  double published;     // decimal as printed
  const char* exact;    // independent exact evaluation (coefficient of h^power)
};

inline constexpr std::array<ErrorConstant, 6> kErrorConstants = {{
    {"k3_distinct_p6", {0, 0, 0, 0, 0}, 3, 6, 0.01956, "3754499729/192008134890"},
    {"k4_distinct_p2", {0, 0, 0, 0, 0}, 4, 2, 0.0236084, "234761/10245312"},
    {"k5_distinct_p1", {0, 0, 0, 0, 0}, 5, 1, 0.00759105, "32131/4233600"},
    {"w100_distinct_p2", {1, 0, 0, 0, 0}, 3, 2, 0.00815429, "17261/2116800"},
    {"w010_distinct_p2", {0, 1, 0, 0, 0}, 3, 2, 0.0173903, "8909/529200"},
    {"w001_distinct_p2", {0, 0, 1, 0, 0}, 3, 2, 0.0252801, "53513/2116800"},
}};

}  // namespace stochint::reference
