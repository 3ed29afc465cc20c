#pragma once

// Test-only reference model of the matrix contract. Written independently
// of src/contract.cpp: users are keyed by address string in ordered maps,
// routing is recursive (one function per contract step), and amounts are
// recomputed from the level. Used as the oracle for routing, conservation
// and replay tests.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using Amount = unsigned __int128;

inline Amount price(int level)
{
    Amount p = 25;
    for (int i = 0; i < 15; ++i)
        p *= 10; // 0.025 ETH = 25e15 wei
    return p << (level - 1);
}

struct Slot3 {
    bool active = false;
    bool blocked = false;
    bool locked_open = false;
    std::string referrer;
    std::vector<std::string> referrals;
    int reinvest = 0;
};

struct Slot4 {
    bool active = false;
    bool blocked = false;
    bool locked_open = false;
    std::string referrer;
    std::vector<std::string> first;
    std::vector<std::string> second;
    std::string closed;
    int reinvest = 0;
};

struct User {
    int id = 0;
    std::string upline;
    int partners = 0;
    std::map<int, Slot3> x3;
    std::map<int, Slot4> x4;
};

struct Payment {
    std::string from;
    std::string to;
    Amount amount = 0;
    int matrix = 3;
    int level = 1;
    std::string cls;
    std::uint64_t tx = 0;

    bool operator==(const Payment&) const = default;
};

class Reference {
public:
    explicit Reference(std::string owner)
        : owner_(std::move(owner))
    {
        User& o = users_[owner_];
        o.id = 0;
        o.upline = owner_;
        for (int l = 1; l <= 12; ++l) {
            o.x3[l].active = true;
            o.x3[l].locked_open = true;
            o.x4[l].active = true;
            o.x4[l].locked_open = true;
        }
    }

    const std::string& owner() const { return owner_; }
    const std::map<std::string, User>& users() const { return users_; }
    const User& user(const std::string& a) const { return users_.at(a); }
    const std::vector<Payment>& payments() const { return payments_; }

    bool registered(const std::string& a) const { return users_.count(a) != 0; }

    // Returns false (and changes nothing) when the call would be rejected.
    bool registration(const std::string& who, const std::string& referrer, Amount value, std::uint64_t tx)
    {
        if (registered(who) || who == referrer || !registered(referrer) || value != 2 * price(1))
            return false;
        tx_ = tx;
        payer_ = who;
        User& u = users_[who];
        u.id = next_id_++;
        u.upline = referrer;
        u.x3[1].active = true;
        u.x4[1].active = true;
        users_[referrer].partners++;

        const std::string r3 = free_referrer(who, 3, 1);
        users_[who].x3[1].referrer = r3;
        update_x3(who, r3, 1, 0);
        update_x4(who, free_referrer(who, 4, 1), 1, 0);
        return true;
    }

    bool buy(const std::string& who, int matrix, int level, Amount value, std::uint64_t tx)
    {
        if (!registered(who) || level < 2 || level > 12 || value != price(level))
            return false;
        User& u = users_[who];
        if (matrix == 3) {
            if (u.x3[level].active || !u.x3[level - 1].active)
                return false;
            tx_ = tx;
            payer_ = who;
            u.x3[level - 1].blocked = false;
            u.x3[level - 1].locked_open = true;
            u.x3[level].active = true;
            const std::string r = free_referrer(who, 3, level);
            users_[who].x3[level].referrer = r;
            update_x3(who, r, level, 0);
        } else {
            if (u.x4[level].active || !u.x4[level - 1].active)
                return false;
            tx_ = tx;
            payer_ = who;
            u.x4[level - 1].blocked = false;
            u.x4[level - 1].locked_open = true;
            u.x4[level].active = true;
            update_x4(who, free_referrer(who, 4, level), level, 0);
        }
        return true;
    }

    std::string free_referrer(const std::string& who, int matrix, int level) const
    {
        std::string cur = who;
        while (true) {
            const std::string up = users_.at(cur).upline;
            const User& uu = users_.at(up);
            const bool active = matrix == 3 ? uu.x3.count(level) && uu.x3.at(level).active
                                            : uu.x4.count(level) && uu.x4.at(level).active;
            if (active)
                return up;
            cur = up;
        }
    }

private:
    bool next_active(const std::string& who, int matrix, int level)
    {
        if (level == 12)
            return false;
        return matrix == 3 ? users_[who].x3[level + 1].active : users_[who].x4[level + 1].active;
    }

    void send(const std::string& intended, int matrix, int level, int hops)
    {
        std::string receiver = intended;
        int guard = 0;
        while (true) {
            const bool blocked = matrix == 3 ? users_[receiver].x3[level].blocked : users_[receiver].x4[level].blocked;
            if (!blocked)
                break;
            receiver = matrix == 3 ? users_[receiver].x3[level].referrer : users_[receiver].x4[level].referrer;
            if (++guard > static_cast<int>(users_.size())) {
                receiver = owner_;
                break;
            }
        }
        std::string cls;
        if (receiver != intended)
            cls = matrix == 3 ? "skip" : "spillover";
        else if (hops > 0)
            cls = "reinvest-passthrough";
        else
            cls = "direct";
        payments_.push_back(Payment { payer_, receiver, price(level), matrix, level, cls, tx_ });
    }

    void update_x3(const std::string& who, const std::string& referrer, int level, int hops)
    {
        Slot3& s = users_[referrer].x3[level];
        if (!s.active)
            throw std::logic_error("reference: inactive x3 slot");
        s.referrals.push_back(who);
        if (s.referrals.size() < 3) {
            send(referrer, 3, level, hops);
            return;
        }
        s.referrals.clear();
        if (level != 12 && !s.locked_open && !next_active(referrer, 3, level))
            users_[referrer].x3[level].blocked = true;
        users_[referrer].x3[level].reinvest++;
        if (referrer == owner_) {
            send(owner_, 3, level, hops + 1);
            return;
        }
        const std::string up = free_referrer(referrer, 3, level);
        users_[referrer].x3[level].referrer = up;
        update_x3(referrer, up, level, hops + 1);
    }

    std::string pick_child(const std::string& holder, const std::string& who, int level)
    {
        const Slot4& h = users_[holder].x4[level];
        std::vector<std::string> options;
        for (const auto& c : h.first) {
            if (c == who || c == holder)
                continue;
            if (users_[c].x4[level].first.size() >= 2)
                continue;
            bool dup = false;
            for (const auto& o : options)
                dup = dup || o == c;
            if (!dup)
                options.push_back(c);
        }
        if (!h.closed.empty()) {
            std::vector<std::string> open;
            for (const auto& o : options) {
                if (o != h.closed)
                    open.push_back(o);
            }
            if (!open.empty())
                options = open;
        }
        std::string best;
        for (const auto& o : options) {
            if (best.empty()) {
                best = o;
                continue;
            }
            const auto no = users_[o].x4[level].first.size();
            const auto nb = users_[best].x4[level].first.size();
            if (no < nb || (no == nb && users_[o].id < users_[best].id))
                best = o;
        }
        return best;
    }

    void update_x4(const std::string& who, const std::string& referrer, int level, int hops)
    {
        if (!users_[referrer].x4[level].active)
            throw std::logic_error("reference: inactive x4 slot");
        if (users_[referrer].x4[level].first.size() < 2) {
            users_[referrer].x4[level].first.push_back(who);
            users_[who].x4[level].referrer = referrer;
            if (referrer == owner_) {
                send(owner_, 4, level, hops);
                return;
            }
            const std::string ref = users_[referrer].x4[level].referrer;
            users_[ref].x4[level].second.push_back(who);
            second_level(who, ref, level, hops);
            return;
        }
        users_[referrer].x4[level].second.push_back(who);
        const std::string child = pick_child(referrer, who, level);
        if (!child.empty()) {
            users_[child].x4[level].first.push_back(who);
            users_[who].x4[level].referrer = child;
        } else {
            users_[who].x4[level].referrer = referrer;
        }
        second_level(who, referrer, level, hops);
    }

    void second_level(const std::string& who, const std::string& referrer, int level, int hops)
    {
        (void)who;
        Slot4& s = users_[referrer].x4[level];
        if (s.second.size() < 4) {
            send(referrer, 4, level, hops);
            return;
        }
        if (referrer != owner_ && !s.referrer.empty()) {
            Slot4& parent = users_[s.referrer].x4[level];
            for (const auto& c : parent.first) {
                if (c == referrer)
                    parent.closed = referrer;
            }
        }
        Slot4& t = users_[referrer].x4[level];
        t.first.clear();
        t.second.clear();
        t.closed.clear();
        if (level != 12 && !t.locked_open && !next_active(referrer, 4, level))
            users_[referrer].x4[level].blocked = true;
        users_[referrer].x4[level].reinvest++;
        if (referrer == owner_) {
            send(owner_, 4, level, hops + 1);
            return;
        }
        update_x4(referrer, free_referrer(referrer, 4, level), level, hops + 1);
    }

    std::string owner_;
    std::map<std::string, User> users_;
    std::vector<Payment> payments_;
    std::string payer_;
    std::uint64_t tx_ = 0;
    int next_id_ = 1;
};

} // namespace oracle
