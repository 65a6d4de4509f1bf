#pragma once

#include <compare>
#include <string>

namespace asrf {

// Calendar quarter stored as a flat index so that t +/- k moves whole quarters.
// The serialized form is the ISO quarter-end date (YYYY-03-31, YYYY-06-30,
// YYYY-09-30 or YYYY-12-31); any other date is rejected.
class Quarter {
  public:
    constexpr Quarter() = default;
    Quarter(int year, int quarter);                      // quarter in 1..4
    static Quarter parse(const std::string& iso_date);   // throws ParseError

    int year() const { return index_ / 4; }
    int quarter_of_year() const { return index_ % 4 + 1; }
    std::string iso_date() const;

    Quarter operator+(int k) const { return from_index(index_ + k); }
    Quarter operator-(int k) const { return from_index(index_ - k); }
    int operator-(Quarter rhs) const { return index_ - rhs.index_; }
    Quarter& operator+=(int k) { index_ += k; return *this; }
    Quarter& operator++() { ++index_; return *this; }

    auto operator<=>(const Quarter&) const = default;

  private:
    static Quarter from_index(int idx) { Quarter q; q.index_ = idx; return q; }
    int index_ = 0;  // year*4 + (quarter-1)
};

}  // namespace asrf
