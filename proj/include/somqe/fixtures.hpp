#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace somqe::fixtures {

// Published QE tables and response-rate tables, stored exactly as printed,
// including the source's internal inconsistencies (the first columns of T1
// and T3 disagree for several rows; T4 prints the same CP under both
// exposure conditions). Nothing here is reconciled or corrected.

struct Table1Row {
    const char* image;
    double qe_first;
    double qe_second;
};

inline constexpr std::array<Table1Row, 20> kTable1{{
    {"dcm 0001", 5544.68, 8078.32},  {"dcm 0002", 5724.76, 7410.38},  {"dcm 0003", 7096.77, 10381.9},
    {"dcm 0004", 6101.77, 6478.89},  {"dcm 0005", 6174.82, 8193.23},  {"dcm 0006", 6507.84, 9757.81},
    {"dcm 0007", 7484.48, 10326.94}, {"dcm 0008", 6661.52, 6985.06},  {"dcm 0009", 5992.41, 5992.17},
    {"dcm 0010", 6417.38, 6972.39},  {"dcm 0011", 6001.4, 5982.37},   {"dcm 0012", 7240.49, 6198.58},
    {"dcm 0013", 6201.82, 9034.32},  {"dcm 0014", 5966.33, 5842.39},  {"dcm 0015", 6024.03, 7830.31},
    {"dcm 0016", 5714.79, 6135.71},  {"dcm 0017", 5557.94, 5924.59},  {"dcm 0018", 7182.26, 9330.04},
    {"dcm 0019", 5450.78, 7041.98},  {"dcm 0020", 6023.86, 5957.58},
}};

struct Table2Row {
    const char* image;
    double original;
    double one_lesion;
    double two_lesions;
};

inline constexpr std::array<Table2Row, 20> kTable2{{
    {"dcm 0001", 1138.9128, 1200.9820, 1234.8677}, {"dcm 0002", 1213.9390, 1273.5073, 1305.3644},
    {"dcm 0003", 912.0454, 985.4192, 1032.4355},   {"dcm 0004", 965.0731, 1024.0330, 1062.7660},
    {"dcm 0005", 848.7616, 908.4071, 948.0895},    {"dcm 0006", 858.5535, 919.0936, 960.0879},
    {"dcm 0007", 857.2325, 927.1354, 969.5507},    {"dcm 0008", 734.0570, 808.2034, 855.7769},
    {"dcm 0009", 676.9681, 751.9430, 802.0007},    {"dcm 0010", 765.6439, 837.8734, 881.9957},
    {"dcm 0011", 782.6192, 851.3009, 895.5168},    {"dcm 0012", 876.5664, 935.8310, 974.4636},
    {"dcm 0013", 1000.3647, 1059.5208, 1095.0401}, {"dcm 0014", 1003.1925, 1068.2832, 1104.3974},
    {"dcm 0015", 1026.7828, 1095.1051, 1131.4206}, {"dcm 0016", 1067.1361, 1137.2907, 1172.9960},
    {"dcm 0017", 1194.5449, 1257.6472, 1290.4847}, {"dcm 0018", 1176.3578, 1232.5629, 1267.2867},
    {"dcm 0019", 1098.3993, 1156.7749, 1191.4239}, {"dcm 0020", 1109.3291, 1157.2493, 1181.3063},
}};

struct Table3Row {
    double clinical1;
    double noised1;
    double clinical2;
    double noised2;
};

inline constexpr std::array<Table3Row, 20> kTable3{{
    {5544.4807, 11086.7877, 8078.2439, 16157.1898}, {7181.9884, 14364.0413, 9330.1503, 18660.5707},
    {5558.1511, 11117.9896, 5924.6644, 11850.9655}, {5714.7921, 11429.2792, 6135.6891, 12273.3048},
    {5023.7532, 12048.4203, 7830.3322, 15663.1586}, {5966.3444, 11932.9385, 5842.4854, 11684.4111},
    {5201.7292, 12405.2023, 9034.2843, 18067.9178}, {7240.853, 14482.1577, 6198.6079, 12401.7001},
    {5001.4699, 12002.7776, 5982.453, 11965.1671},  {5417.1673, 12836.4429, 5972.2216, 13943.6979},
    {5992.5, 11984.7077, 5992.1492, 11984.4634},    {5661.4586, 13324.6943, 5985.1401, 13973.7904},
    {7484.6984, 14968.1884, 10327.1069, 20659.262}, {5507.8144, 13017.8913, 9757.7571, 19514.2742},
    {5174.883, 12349.7042, 8193.1116, 16388.2526},  {5101.946, 12203.2147, 5478.8401, 12960.4942},
    {7096.3922, 14191.5997, 10381.9172, 20764.6702},{5724.8007, 11450.6902, 7410.2646, 14823.074},
    {5450.6741, 10901.116, 7041.9858, 14083.6771},  {5023.8499, 12049.4355, 5957.4332, 11916.3526},
}};

/// One exposure condition of a same-different response table (T4-T6).
struct RatePanel {
    double cn;
    double fn;
    double fp;
    double cp;
};

struct RateTable {
    RatePanel five_second;
    RatePanel observer_controlled;
};

inline constexpr RateTable kTable4{{88.7, 91.4, 11.3, 8.6}, {86.5, 91.4, 13.5, 8.6}};   // 5% dot increase
inline constexpr RateTable kTable5{{87.5, 82.0, 12.5, 18.0}, {87.0, 77.4, 13.0, 22.6}}; // 10%
inline constexpr RateTable kTable6{{85.5, 66.4, 14.5, 33.6}, {86.5, 60.9, 13.5, 39.1}}; // 30%

struct Table7Row {
    const char* label;
    double qe;
    bool has_rates;  // the 0% baseline row prints no detection rates
    double cp_five_second;
    double fp_five_second;
    double cp_observer;
    double fp_observer;
};

inline constexpr std::array<Table7Row, 4> kTable7{{
    {"0%", 750.3749, false, 0.0, 0.0, 0.0, 0.0},
    {"5%", 750.4555, true, 8.6, 13.0, 8.6, 13.0},
    {"10%", 751.7827, true, 18.0, 13.0, 22.6, 13.0},
    {"30%", 754.4679, true, 33.6, 13.0, 39.1, 13.0},
}};

// Column views for the statistics pipelines.

inline std::vector<double> table1_first() {
    std::vector<double> v;
    for (const auto& r : kTable1) v.push_back(r.qe_first);
    return v;
}
inline std::vector<double> table1_second() {
    std::vector<double> v;
    for (const auto& r : kTable1) v.push_back(r.qe_second);
    return v;
}
inline std::vector<double> table2_original() {
    std::vector<double> v;
    for (const auto& r : kTable2) v.push_back(r.original);
    return v;
}
inline std::vector<double> table2_one_lesion() {
    std::vector<double> v;
    for (const auto& r : kTable2) v.push_back(r.one_lesion);
    return v;
}
inline std::vector<double> table2_two_lesions() {
    std::vector<double> v;
    for (const auto& r : kTable2) v.push_back(r.two_lesions);
    return v;
}

namespace detail {
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
inline std::string rate_csv(const char* id, const RateTable& t) {
    std::string out = "table,condition,cn,fn,fp,cp\n";
    for (const auto& [cond, p] : {std::pair{"five_second", t.five_second},
                                  std::pair{"observer_controlled", t.observer_controlled}})
        out += std::string(id) + "," + cond + "," + num(p.cn) + "," + num(p.fn) + "," + num(p.fp) + "," +
               num(p.cp) + "\n";
    return out;
}
}  // namespace detail

/// CSV rendering of one fixture table (ids T1..T7).
inline std::string dump(const std::string& table_id) {
    using detail::num;
    if (table_id == "T1") {
        std::string out = "image,qe_first_visit,qe_second_visit\n";
        for (const auto& r : kTable1) out += std::string(r.image) + "," + num(r.qe_first) + "," + num(r.qe_second) + "\n";
        return out;
    }
    if (table_id == "T2") {
        std::string out = "image,original,one_lesion,two_lesions\n";
        for (const auto& r : kTable2)
            out += std::string(r.image) + "," + num(r.original) + "," + num(r.one_lesion) + "," + num(r.two_lesions) + "\n";
        return out;
    }
    if (table_id == "T3") {
        std::string out = "clinical1,noised1,clinical2,noised2\n";
        for (const auto& r : kTable3)
            out += num(r.clinical1) + "," + num(r.noised1) + "," + num(r.clinical2) + "," + num(r.noised2) + "\n";
        return out;
    }
    if (table_id == "T4") return detail::rate_csv("T4", kTable4);
    if (table_id == "T5") return detail::rate_csv("T5", kTable5);
    if (table_id == "T6") return detail::rate_csv("T6", kTable6);
    if (table_id == "T7") {
        std::string out = "dot_size_increase,qe,cp_five_second,fp_five_second,cp_observer,fp_observer\n";
        for (const auto& r : kTable7) {
            out += std::string(r.label) + "," + num(r.qe);
            if (r.has_rates)
                out += "," + num(r.cp_five_second) + "," + num(r.fp_five_second) + "," + num(r.cp_observer) + "," +
                       num(r.fp_observer);
            else
                out += ",,,,";
            out += "\n";
        }
        return out;
    }
    throw std::invalid_argument("unknown fixture table id: " + table_id + " (expected T1..T7)");
}

}  // namespace somqe::fixtures
