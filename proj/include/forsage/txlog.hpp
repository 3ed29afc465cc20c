#pragma once

#include "forsage/contract.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forsage {

enum class TxFunction : std::uint8_t { Register, BuyNewLevel, Fallback };

std::string_view to_string(TxFunction f);
std::optional<TxFunction> parse_function(std::string_view text);

/// One contract call: the replayable abstraction of a chain transaction.
struct TxRecord {
    std::uint64_t ordinal = 0;
    Address sender;
    TxFunction function = TxFunction::Register;
    std::optional<Address> referrer;
    std::optional<MatrixKind> matrix;
    std::optional<Level> level;
    Wei value;
    std::optional<Wei> fee;

    friend bool operator==(const TxRecord&, const TxRecord&) = default;
};

inline constexpr std::string_view kTxLogHeader = "ordinal,sender,function,referrer,matrix,level,value_wei,fee_wei";
inline constexpr std::string_view kEventsHeader = "tx_ordinal,from,to,amount_wei,matrix,level,classification";

enum class ParseErrorCode { BadHeader, MalformedRow, NonMonotonicOrdinal, UnknownFunction };
std::string_view to_string(ParseErrorCode code);

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorCode code, std::size_t line, const std::string& detail);
    ParseErrorCode code() const { return code_; }
    std::size_t line() const { return line_; }

private:
    ParseErrorCode code_;
    std::size_t line_;
};

/// Parses the CSV transaction log. Lines are 1-based in errors; the header
/// is line 1. Blank lines are ignored, a trailing CR is tolerated.
std::vector<TxRecord> parse_txlog(std::istream& in);
std::vector<TxRecord> parse_txlog(std::string_view text);

std::string format_tx_row(const TxRecord& rec);
std::string serialize_txlog(std::span<const TxRecord> records);

std::string format_event_row(const PaymentEvent& ev);
std::string serialize_events(std::span<const PaymentEvent> events);
std::vector<PaymentEvent> parse_events(std::string_view text);

/// Applies one record to the state, dispatching fallback calls to
/// registration under the owner.
TxEffects apply_transaction(ContractState& state, const TxRecord& rec);

enum class ReplayMode { Strict, Lenient };

struct SkippedRecord {
    TxRecord record;
    ErrorCode error;
    std::string message;
};

struct ReplayResult {
    std::vector<PaymentEvent> events;
    std::vector<TxRecord> applied;
    std::vector<SkippedRecord> skipped;
};

class ReplayError : public std::runtime_error {
public:
    ReplayError(std::uint64_t ordinal, ErrorCode code, const std::string& detail);
    std::uint64_t ordinal() const { return ordinal_; }
    ErrorCode code() const { return code_; }

private:
    std::uint64_t ordinal_;
    ErrorCode code_;
};

/// Replays records in order. Strict mode throws ReplayError on the first
/// rejected record (the state keeps every record applied before it);
/// lenient mode records the rejection and continues. A rejected record
/// never mutates the state.
ReplayResult replay(ContractState& state, std::span<const TxRecord> records, ReplayMode mode = ReplayMode::Strict);

/// Sidecar for lenient replays: the log schema plus an `error` column.
std::string serialize_skip_log(std::span<const SkippedRecord> skipped);

} // namespace forsage
