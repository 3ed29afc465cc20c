#include "forsage/txlog.hpp"

#include <sstream>

namespace forsage {

std::string_view to_string(TxFunction f)
{
    switch (f) {
    case TxFunction::Register:
        return "register";
    case TxFunction::BuyNewLevel:
        return "buyNewLevel";
    case TxFunction::Fallback:
        return "fallback";
    }
    return "unknown";
}

std::optional<TxFunction> parse_function(std::string_view text)
{
    for (auto f : { TxFunction::Register, TxFunction::BuyNewLevel, TxFunction::Fallback }) {
        if (to_string(f) == text)
            return f;
    }
    return std::nullopt;
}

std::string_view to_string(ParseErrorCode code)
{
    switch (code) {
    case ParseErrorCode::BadHeader:
        return "bad-header";
    case ParseErrorCode::MalformedRow:
        return "malformed-row";
    case ParseErrorCode::NonMonotonicOrdinal:
        return "non-monotonic-ordinal";
    case ParseErrorCode::UnknownFunction:
        return "unknown-function";
    }
    return "unknown";
}

ParseError::ParseError(ParseErrorCode code, std::size_t line, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + " at line " + std::to_string(line) + ": " + detail)
    , code_(code)
    , line_(line)
{
}

ReplayError::ReplayError(std::uint64_t ordinal, ErrorCode code, const std::string& detail)
    : std::runtime_error("ordinal " + std::to_string(ordinal) + ": " + detail)
    , ordinal_(ordinal)
    , code_(code)
{
}

namespace {

    std::vector<std::string_view> split_csv(std::string_view line)
    {
        std::vector<std::string_view> cols;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            if (comma == std::string_view::npos) {
                cols.push_back(line.substr(start));
                return cols;
            }
            cols.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
    }

    bool valid_address(std::string_view a)
    {
        if (a.empty())
            return false;
        for (char c : a) {
            const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '-' || c == '.';
            if (!ok)
                return false;
        }
        return true;
    }

    std::uint64_t parse_u64(std::string_view s, std::size_t line, std::string_view what)
    {
        if (s.empty() || s.size() > 19)
            throw ParseError(ParseErrorCode::MalformedRow, line, "bad " + std::string(what) + " '" + std::string(s) + "'");
        std::uint64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9')
                throw ParseError(ParseErrorCode::MalformedRow, line, "bad " + std::string(what) + " '" + std::string(s) + "'");
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        return v;
    }

    Wei parse_wei_field(std::string_view s, std::size_t line, std::string_view what)
    {
        try {
            return Wei::parse(s);
        } catch (const AmountError& e) {
            throw ParseError(ParseErrorCode::MalformedRow, line, std::string(what) + ": " + e.what());
        }
    }

    std::string_view strip_cr(std::string_view line)
    {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        return line;
    }

    TxRecord parse_row(std::string_view line, std::size_t line_no)
    {
        const auto cols = split_csv(line);
        if (cols.size() != 8)
            throw ParseError(ParseErrorCode::MalformedRow, line_no, "expected 8 columns, got " + std::to_string(cols.size()));

        TxRecord rec;
        rec.ordinal = parse_u64(cols[0], line_no, "ordinal");
        if (!valid_address(cols[1]))
            throw ParseError(ParseErrorCode::MalformedRow, line_no, "bad sender '" + std::string(cols[1]) + "'");
        rec.sender = Address { std::string(cols[1]) };
        const auto fn = parse_function(cols[2]);
        if (!fn)
            throw ParseError(ParseErrorCode::UnknownFunction, line_no, "'" + std::string(cols[2]) + "'");
        rec.function = *fn;

        if (!cols[3].empty()) {
            if (!valid_address(cols[3]))
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "bad referrer '" + std::string(cols[3]) + "'");
            rec.referrer = Address { std::string(cols[3]) };
        }
        if (!cols[4].empty()) {
            rec.matrix = parse_matrix(cols[4]);
            if (!rec.matrix)
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "bad matrix '" + std::string(cols[4]) + "'");
        }
        if (!cols[5].empty()) {
            const auto lv = parse_u64(cols[5], line_no, "level");
            if (lv < Level::kMin || lv > Level::kMax)
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "level out of range");
            rec.level = Level(static_cast<int>(lv));
        }
        rec.value = parse_wei_field(cols[6], line_no, "value_wei");
        if (!cols[7].empty())
            rec.fee = parse_wei_field(cols[7], line_no, "fee_wei");

        switch (rec.function) {
        case TxFunction::Register:
            if (rec.matrix || rec.level)
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "register takes no matrix/level");
            break;
        case TxFunction::BuyNewLevel:
            if (!rec.matrix || !rec.level)
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "buyNewLevel requires matrix and level");
            if (rec.referrer)
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "buyNewLevel takes no referrer");
            break;
        case TxFunction::Fallback:
            if (rec.referrer || rec.matrix || rec.level)
                throw ParseError(ParseErrorCode::MalformedRow, line_no, "fallback takes no referrer/matrix/level");
            break;
        }
        return rec;
    }

} // namespace

std::vector<TxRecord> parse_txlog(std::istream& in)
{
    std::vector<TxRecord> out;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = strip_cr(raw);
        if (!header_seen) {
            if (line != kTxLogHeader)
                throw ParseError(ParseErrorCode::BadHeader, line_no, "expected '" + std::string(kTxLogHeader) + "'");
            header_seen = true;
            continue;
        }
        if (line.empty())
            continue;
        auto rec = parse_row(line, line_no);
        if (!out.empty() && rec.ordinal <= out.back().ordinal) {
            throw ParseError(ParseErrorCode::NonMonotonicOrdinal, line_no,
                std::to_string(rec.ordinal) + " after " + std::to_string(out.back().ordinal));
        }
        out.push_back(std::move(rec));
    }
    if (!header_seen)
        throw ParseError(ParseErrorCode::BadHeader, 1, "missing header");
    return out;
}

std::vector<TxRecord> parse_txlog(std::string_view text)
{
    std::istringstream in { std::string(text) };
    return parse_txlog(in);
}

std::string format_tx_row(const TxRecord& rec)
{
    std::string row = std::to_string(rec.ordinal);
    row += ',';
    row += rec.sender.value;
    row += ',';
    row += to_string(rec.function);
    row += ',';
    if (rec.referrer)
        row += rec.referrer->value;
    row += ',';
    if (rec.matrix)
        row += to_string(*rec.matrix);
    row += ',';
    if (rec.level)
        row += std::to_string(rec.level->value());
    row += ',';
    row += rec.value.to_string();
    row += ',';
    if (rec.fee)
        row += rec.fee->to_string();
    return row;
}

std::string serialize_txlog(std::span<const TxRecord> records)
{
    std::string out(kTxLogHeader);
    out += '\n';
    for (const auto& rec : records) {
        out += format_tx_row(rec);
        out += '\n';
    }
    return out;
}

std::string format_event_row(const PaymentEvent& ev)
{
    return std::to_string(ev.tx_ordinal) + "," + ev.from.value + "," + ev.to.value + "," + ev.amount.to_string()
        + "," + std::string(to_string(ev.matrix)) + "," + std::to_string(ev.level.value()) + ","
        + std::string(to_string(ev.classification));
}

std::string serialize_events(std::span<const PaymentEvent> events)
{
    std::string out(kEventsHeader);
    out += '\n';
    for (const auto& ev : events) {
        out += format_event_row(ev);
        out += '\n';
    }
    return out;
}

std::vector<PaymentEvent> parse_events(std::string_view text)
{
    std::vector<PaymentEvent> out;
    std::istringstream in { std::string(text) };
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = strip_cr(raw);
        if (line_no == 1) {
            if (line != kEventsHeader)
                throw ParseError(ParseErrorCode::BadHeader, 1, "expected '" + std::string(kEventsHeader) + "'");
            continue;
        }
        if (line.empty())
            continue;
        const auto cols = split_csv(line);
        if (cols.size() != 7)
            throw ParseError(ParseErrorCode::MalformedRow, line_no, "expected 7 columns");
        const auto matrix = parse_matrix(cols[4]);
        const auto cls = parse_payment_class(cols[6]);
        const auto lv = parse_u64(cols[5], line_no, "level");
        if (!matrix || !cls || lv < Level::kMin || lv > Level::kMax)
            throw ParseError(ParseErrorCode::MalformedRow, line_no, "bad matrix, level or classification");
        out.push_back(PaymentEvent {
            Address { std::string(cols[1]) },
            Address { std::string(cols[2]) },
            parse_wei_field(cols[3], line_no, "amount_wei"),
            *matrix,
            Level(static_cast<int>(lv)),
            *cls,
            parse_u64(cols[0], line_no, "tx_ordinal"),
        });
    }
    return out;
}

TxEffects apply_transaction(ContractState& state, const TxRecord& rec)
{
    switch (rec.function) {
    case TxFunction::Register:
        return register_user(state, rec.sender, rec.referrer, rec.value, rec.ordinal);
    case TxFunction::Fallback:
        return register_user(state, rec.sender, state.owner_address(), rec.value, rec.ordinal);
    case TxFunction::BuyNewLevel:
        return buy_new_level(state, rec.sender, rec.matrix.value(), rec.level.value(), rec.value, rec.ordinal);
    }
    return {};
}

ReplayResult replay(ContractState& state, std::span<const TxRecord> records, ReplayMode mode)
{
    ReplayResult result;
    for (const auto& rec : records) {
        try {
            auto fx = apply_transaction(state, rec);
            result.events.insert(result.events.end(), std::make_move_iterator(fx.payments.begin()),
                std::make_move_iterator(fx.payments.end()));
            result.applied.push_back(rec);
        } catch (const ContractError& e) {
            if (mode == ReplayMode::Strict)
                throw ReplayError(rec.ordinal, e.code(), e.what());
            result.skipped.push_back(SkippedRecord { rec, e.code(), e.what() });
        }
    }
    return result;
}

std::string serialize_skip_log(std::span<const SkippedRecord> skipped)
{
    std::string out(kTxLogHeader);
    out += ",error\n";
    for (const auto& s : skipped) {
        out += format_tx_row(s.record);
        out += ',';
        out += to_string(s.error);
        out += '\n';
    }
    return out;
}

} // namespace forsage
