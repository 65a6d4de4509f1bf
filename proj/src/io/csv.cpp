#include "asrf/io/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "asrf/errors.hpp"

namespace asrf::io {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
    if (line.find('"') != std::string::npos)
        throw ParseError("quoted fields are not supported", line_no,
                         line.find('"') + 1);
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& cell, std::size_t line_no, std::size_t col) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
        throw ParseError("bad numeric cell '" + cell + "'", line_no, col);
    return v;
}

std::optional<double> parse_optional(const std::string& cell, std::size_t line_no,
                                     std::size_t col) {
    if (cell.empty()) return std::nullopt;
    return parse_double(cell, line_no, col);
}

// Line-oriented reader with mandatory exact header.
class CsvReader {
  public:
    CsvReader(std::istream& in, const std::string& expected_header, std::string name)
        : in_(in), name_(std::move(name)) {
        std::string header;
        if (!std::getline(in_, header))
            throw ParseError(name_ + ": missing header", 1, 1);
        if (!header.empty() && header.back() == '\r') header.pop_back();
        if (header != expected_header)
            throw ParseError(name_ + ": expected header '" + expected_header +
                                 "', got '" + header + "'",
                             1, 1);
        line_no_ = 1;
    }

    bool next(std::vector<std::string>& cells, std::size_t expected_cols) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            cells = split_line(line, line_no_);
            if (cells.size() != expected_cols)
                throw ParseError(name_ + ": expected " + std::to_string(expected_cols) +
                                     " cells, got " + std::to_string(cells.size()),
                                 line_no_, 1);
            return true;
        }
        return false;
    }

    std::size_t line() const { return line_no_; }

  private:
    std::istream& in_;
    std::string name_;
    std::size_t line_no_ = 0;
};

constexpr const char* kGradesHeader =
    "quarter,grade_id,asset_class,ead,lgd,pd,maturity_years,firm_size,rho_override";
constexpr const char* kAccountsHeader =
    "quarter,rwa_irb,rwa_credit,rwa_total,provisions,capital_base,non_irb_expected_loss";
constexpr const char* kLossesHeader = "quarter,credit_loss";

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

IngestResult ingest_streams(std::istream& grades_in, std::istream& accounts_in,
                            std::istream& losses_in) {
    QuarterSeries series;

    CsvReader grades(grades_in, kGradesHeader, "grades.csv");
    std::vector<std::string> c;
    while (grades.next(c, 9)) {
        Quarter q = Quarter::parse(c[0]);
        ObligorGrade g;
        g.id = c[1];
        g.asset_class = asset_class_from_string(c[2]);
        g.ead = parse_double(c[3], grades.line(), 4);
        g.lgd = parse_double(c[4], grades.line(), 5);
        g.pd = parse_double(c[5], grades.line(), 6);
        g.maturity_years = parse_optional(c[6], grades.line(), 7);
        g.firm_size = parse_optional(c[7], grades.line(), 8);
        g.rho_override = parse_optional(c[8], grades.line(), 9);
        auto [it, inserted] = series.snapshots.try_emplace(q, PortfolioSnapshot{q, {}});
        (void)inserted;
        it->second.grades.push_back(std::move(g));
    }

    CsvReader accounts(accounts_in, kAccountsHeader, "accounts.csv");
    while (accounts.next(c, 7)) {
        Quarter q = Quarter::parse(c[0]);
        CapitalAccounts a;
        a.as_of = q;
        a.rwa_irb = parse_double(c[1], accounts.line(), 2);
        a.rwa_credit = parse_double(c[2], accounts.line(), 3);
        a.rwa_total = parse_double(c[3], accounts.line(), 4);
        a.provisions = parse_double(c[4], accounts.line(), 5);
        a.capital_base = parse_double(c[5], accounts.line(), 6);
        a.non_irb_expected_loss = parse_double(c[6], accounts.line(), 7);
        if (!series.accounts.emplace(q, a).second)
            throw ParseError("duplicate accounts row for " + q.iso_date(),
                             accounts.line(), 1);
    }

    CsvReader losses(losses_in, kLossesHeader, "losses.csv");
    while (losses.next(c, 2)) {
        Quarter q = Quarter::parse(c[0]);
        LossRecord r{q, parse_double(c[1], losses.line(), 2)};
        if (!series.losses.emplace(q, r).second)
            throw ParseError("duplicate loss row for " + q.iso_date(), losses.line(), 1);
    }

    auto report = validate_series(series);
    if (has_errors(report)) {
        std::string msg = "series failed validation:";
        for (const auto& v : report)
            if (v.severity == Severity::Error) msg += "\n  " + format_violation(v);
        throw ValidationError(msg);
    }
    IngestResult result;
    result.series = std::move(series);
    for (auto& v : report)
        if (v.severity == Severity::Warning) result.warnings.push_back(std::move(v));
    return result;
}

IngestResult ingest(const CsvPaths& paths) {
    auto open = [](const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open '" + path + "'");
        return f;
    };
    std::ifstream g = open(paths.grades);
    std::ifstream a = open(paths.accounts);
    std::ifstream l = open(paths.losses);
    return ingest_streams(g, a, l);
}

void emit(const QuarterSeries& series, std::ostream& grades, std::ostream& accounts,
          std::ostream& losses) {
    auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    grades << kGradesHeader << "\n";
    for (const auto& [q, snap] : series.snapshots) {
        for (const auto& g : snap.grades) {
            grades << q.iso_date() << ',' << g.id << ',' << to_string(g.asset_class)
                   << ',' << format_double(g.ead) << ',' << format_double(g.lgd) << ','
                   << format_double(g.pd) << ',' << opt(g.maturity_years) << ','
                   << opt(g.firm_size) << ',' << opt(g.rho_override) << "\n";
        }
    }
    accounts << kAccountsHeader << "\n";
    for (const auto& [q, a] : series.accounts) {
        accounts << q.iso_date() << ',' << format_double(a.rwa_irb) << ','
                 << format_double(a.rwa_credit) << ',' << format_double(a.rwa_total)
                 << ',' << format_double(a.provisions) << ','
                 << format_double(a.capital_base) << ','
                 << format_double(a.non_irb_expected_loss) << "\n";
    }
    losses << kLossesHeader << "\n";
    for (const auto& [q, r] : series.losses)
        losses << q.iso_date() << ',' << format_double(r.credit_loss) << "\n";
}

CsvPaths emit_directory(const QuarterSeries& series, const std::string& dir) {
    std::filesystem::create_directories(dir);
    CsvPaths paths{dir + "/grades.csv", dir + "/accounts.csv", dir + "/losses.csv"};
    std::ofstream g(paths.grades), a(paths.accounts), l(paths.losses);
    if (!g || !a || !l) throw ParseError("cannot write under '" + dir + "'");
    emit(series, g, a, l);
    return paths;
}

}  // namespace asrf::io
