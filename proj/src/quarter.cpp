#include "asrf/quarter.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "asrf/errors.hpp"

namespace asrf {

namespace {
// month/day pairs of calendar quarter ends, indexed by quarter-1
constexpr std::array<std::pair<int, int>, 4> kQuarterEnds = {
    {{3, 31}, {6, 30}, {9, 30}, {12, 31}}};
}

Quarter::Quarter(int year, int quarter) {
    if (quarter < 1 || quarter > 4)
        throw ParseError("quarter must be in 1..4, got " + std::to_string(quarter));
    index_ = year * 4 + (quarter - 1);
}

Quarter Quarter::parse(const std::string& iso_date) {
    if (iso_date.size() != 10 || iso_date[4] != '-' || iso_date[7] != '-')
        throw ParseError("expected quarter-end date YYYY-MM-DD, got '" + iso_date + "'");
    auto parse_int = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        auto [p, ec] = std::from_chars(iso_date.data() + pos, iso_date.data() + pos + len, v);
        if (ec != std::errc{} || p != iso_date.data() + pos + len)
            throw ParseError("bad numeric field in date '" + iso_date + "'");
        return v;
    };
    int year = parse_int(0, 4);
    int month = parse_int(5, 2);
    int day = parse_int(8, 2);
    for (int q = 0; q < 4; ++q) {
        if (kQuarterEnds[q].first == month && kQuarterEnds[q].second == day)
            return Quarter(year, q + 1);
    }
    throw ParseError("'" + iso_date + "' is not a calendar quarter end");
}

std::string Quarter::iso_date() const {
    auto [month, day] = kQuarterEnds[static_cast<std::size_t>(quarter_of_year() - 1)];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year(), month, day);
    return buf;
}

}  // namespace asrf
