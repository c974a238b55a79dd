#include "bchange/synth.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bchange/rng.hpp"

namespace bchange::synth {

namespace {

using ingest::Action;
using ingest::AccountTimeline;
using ingest::ContentCounts;
using ingest::PostEvent;

// Gap classes sampled log-uniform inside class interiors, away from the
// pause-glyph edges.
enum class Gap { none, minutes, hours, days, months };

std::int64_t sample_gap(rng::Pcg32& gen, Gap g) {
    switch (g) {
        case Gap::none: return gen.int_in(5, 55);
        case Gap::minutes: return static_cast<std::int64_t>(gen.log_uniform(70, 3300));
        case Gap::hours: return static_cast<std::int64_t>(gen.log_uniform(4000, 80000));
        case Gap::days: return static_cast<std::int64_t>(gen.log_uniform(90000, 2400000));
        case Gap::months: return static_cast<std::int64_t>(gen.log_uniform(2700000, 7000000));
    }
    return 60;
}

Gap pick_gap(rng::Pcg32& gen, double p_none, double p_min, double p_hour, double p_day) {
    const double r = gen.next_double();
    if (r < p_none) return Gap::none;
    if (r < p_none + p_min) return Gap::minutes;
    if (r < p_none + p_min + p_hour) return Gap::hours;
    if (r < p_none + p_min + p_hour + p_day) return Gap::days;
    return Gap::months;
}

Action pick_action(rng::Pcg32& gen, double w_post, double w_reshare) {
    const double r = gen.next_double();
    if (r < w_post) return Action::post;
    if (r < w_post + w_reshare) return Action::reshare;
    return Action::reply;
}

std::string padded(int value, int width = 4) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

AccountTimeline make_stable_human(const std::string& id, std::uint64_t seed, int n_events,
                                  std::int64_t start) {
    rng::Pcg32 gen(seed);
    AccountTimeline tl;
    tl.account_id = id;

    // Mild per-account tilt of the action mix.
    double w_post = 0.50 + gen.uniform(-0.12, 0.12);
    double w_reshare = 0.30 + gen.uniform(-0.08, 0.08);

    std::int64_t t = start + gen.int_in(0, 36000);
    for (int i = 0; i < n_events; ++i) {
        PostEvent ev;
        ev.timestamp = t;
        ev.action = pick_action(gen, w_post, w_reshare);
        ev.content.text_terms = 1;
        ev.content.mentions = static_cast<std::uint32_t>(gen.bounded(4));
        ev.content.links = gen.chance(0.35) ? 1 : 0;
        ev.content.hashtags = gen.chance(0.30) ? 1 + gen.bounded(2) : 0;
        ev.content.media = gen.chance(0.12) ? 1 : 0;
        tl.events.push_back(ev);
        t += sample_gap(gen, pick_gap(gen, 0.12, 0.45, 0.30, 0.12));
    }
    tl.label = ingest::AccountLabel{ingest::Label::negative, ingest::Task::automation, ""};
    return tl;
}

AccountTimeline make_repetitive_bot(const std::string& id, std::uint64_t seed, int n_events,
                                    std::int64_t start, double perturbation) {
    rng::Pcg32 gen(seed);
    AccountTimeline tl;
    tl.account_id = id;

    static constexpr const char* kCycles[] = {"TTrT", "TrTr", "TTTT"};
    const std::string cycle = kCycles[gen.bounded(3)];
    const std::int64_t base_gap = gen.int_in(200, 500);
    const bool with_link = gen.chance(0.5);

    std::int64_t t = start + gen.int_in(0, 36000);
    for (int i = 0; i < n_events; ++i) {
        PostEvent ev;
        ev.timestamp = t;
        const char c = cycle[static_cast<std::size_t>(i) % cycle.size()];
        ev.action = c == 'T' ? Action::post : (c == 'r' ? Action::reshare : Action::reply);
        if (gen.chance(perturbation))
            ev.action = pick_action(gen, 1.0 / 3, 1.0 / 3);
        ev.content.text_terms = 1;
        ev.content.links = with_link ? 1 : 0;
        if (gen.chance(perturbation)) ev.content.mentions = 1;
        tl.events.push_back(ev);
        t += base_gap + gen.int_in(-10, 10);
    }
    tl.label = ingest::AccountLabel{ingest::Label::positive, ingest::Task::automation, ""};
    return tl;
}

AccountTimeline make_erratic_bot(const std::string& id, std::uint64_t seed, int n_events,
                                 std::int64_t start, int switch_points) {
    rng::Pcg32 gen(seed);
    AccountTimeline tl;
    tl.account_id = id;

    // Switch points uniform over the timeline (distinct event indices).
    std::vector<std::int64_t> switches;
    while (static_cast<int>(switches.size()) < switch_points) {
        std::int64_t s = gen.int_in(1, n_events - 1);
        if (std::find(switches.begin(), switches.end(), s) == switches.end())
            switches.push_back(s);
    }
    std::sort(switches.begin(), switches.end());

    // Per-phase regimes: dominant action, pause tempo, and a content
    // vocabulary disjoint from every other phase's, shrinking in volume so
    // later phases stay distant from the accumulated history.
    static constexpr Action kDominant[] = {Action::post, Action::reshare, Action::reply,
                                           Action::post};
    static constexpr Gap kTempo[] = {Gap::minutes, Gap::hours, Gap::minutes, Gap::days};

    std::int64_t t = start + gen.int_in(0, 36000);
    for (int i = 0; i < n_events; ++i) {
        std::size_t phase = 0;
        for (std::int64_t s : switches)
            if (i >= s) ++phase;
        phase %= 4;

        PostEvent ev;
        ev.timestamp = t;
        ev.action = gen.chance(0.9) ? kDominant[phase] : pick_action(gen, 1.0 / 3, 1.0 / 3);
        const std::uint32_t jitter = gen.bounded(3);
        switch (phase) {
            case 0: ev.content.media = 25 + jitter; break;
            case 1: ev.content.mentions = 8 + jitter; break;
            case 2: ev.content.hashtags = 2 + jitter; break;
            case 3: ev.content.text_terms = 1; break;
        }
        tl.events.push_back(ev);
        t += sample_gap(gen, kTempo[phase]);
    }
    tl.label = ingest::AccountLabel{ingest::Label::positive, ingest::Task::automation, ""};
    return tl;
}

struct TemplateEvent {
    Action action = Action::post;
    std::int64_t gap_after = 0;  // seconds to the next event
    ContentCounts content;
};

// The shared script a coordinated group jitters around: session-structured,
// strongly patterned, drawn once per campaign.
std::vector<TemplateEvent> make_template(std::uint64_t seed, int n_events) {
    rng::Pcg32 gen(seed);
    std::vector<TemplateEvent> tmpl;
    tmpl.reserve(static_cast<std::size_t>(n_events));

    std::string cycle = "TrTT";
    cycle[gen.bounded(4)] = "Trp"[gen.bounded(3)];
    const int session_len = static_cast<int>(gen.int_in(6, 10));

    static constexpr ContentCounts kWords[] = {
        {1, 1, 0, 0, 0},  // Ut
        {1, 1, 1, 0, 0},  // UHt
        {1, 0, 0, 0, 0},  // t
        {1, 0, 0, 0, 2},  // mmt
    };
    const std::size_t word_a = gen.bounded(4);
    const std::size_t word_b = gen.bounded(4);

    for (int i = 0; i < n_events; ++i) {
        TemplateEvent te;
        const char c = cycle[static_cast<std::size_t>(i) % cycle.size()];
        te.action = c == 'T' ? Action::post : (c == 'r' ? Action::reshare : Action::reply);
        te.content = kWords[i % 2 == 0 ? word_a : word_b];
        te.gap_after = (i + 1) % session_len == 0 ? gen.int_in(20000, 60000)
                                                  : gen.int_in(150, 400);
        tmpl.push_back(te);
    }
    return tmpl;
}

AccountTimeline make_coordinated(const std::string& id, std::uint64_t seed,
                                 const std::vector<TemplateEvent>& tmpl, std::int64_t start,
                                 double perturbation, const std::string& campaign) {
    rng::Pcg32 gen(seed);
    AccountTimeline tl;
    tl.account_id = id;

    std::int64_t t = start + gen.int_in(0, 600);
    for (const auto& te : tmpl) {
        PostEvent ev;
        ev.timestamp = t;
        ev.action = te.action;
        if (gen.chance(perturbation)) ev.action = pick_action(gen, 1.0 / 3, 1.0 / 3);
        ev.content = te.content;
        if (gen.chance(perturbation)) ev.content.mentions += 1;
        tl.events.push_back(ev);
        // Jitter stays well inside the template gap's pause class.
        t += te.gap_after + gen.int_in(-30, 30);
    }
    tl.label = ingest::AccountLabel{ingest::Label::positive, ingest::Task::coordination, campaign};
    return tl;
}

std::string default_prefix(Regime r) {
    switch (r) {
        case Regime::stable_human: return "stable_";
        case Regime::repetitive_bot: return "repbot_";
        case Regime::erratic_bot: return "errbot_";
        case Regime::coordinated_group: return "coord_";
    }
    return "acct_";
}

void validate(const RegimeSpec& spec) {
    if (spec.n_accounts < 1) throw std::invalid_argument("n_accounts must be positive");
    if (spec.n_events < 20 || spec.n_events > 300)
        throw std::invalid_argument("n_events must be in [20, 300] to pass eligibility");
    if (spec.regime == Regime::erratic_bot &&
        (spec.switch_points < 1 || spec.switch_points >= spec.n_events - 1))
        throw std::invalid_argument("switch_points out of range");
}

}  // namespace

std::vector<AccountTimeline> generate(const RegimeSpec& spec) {
    validate(spec);
    const std::string prefix =
        spec.id_prefix.empty() ? default_prefix(spec.regime) : spec.id_prefix;

    std::vector<TemplateEvent> tmpl;
    if (spec.regime == Regime::coordinated_group)
        tmpl = make_template(rng::derive_seed(spec.seed, "template|" + spec.campaign),
                             spec.n_events);

    std::vector<AccountTimeline> out;
    out.reserve(static_cast<std::size_t>(spec.n_accounts));
    for (int i = 0; i < spec.n_accounts; ++i) {
        const std::string id = prefix + padded(i);
        const std::uint64_t account_seed = rng::derive_seed(spec.seed, "account|" + id);
        switch (spec.regime) {
            case Regime::stable_human:
                out.push_back(make_stable_human(id, account_seed, spec.n_events, spec.start_time));
                break;
            case Regime::repetitive_bot:
                out.push_back(make_repetitive_bot(id, account_seed, spec.n_events,
                                                  spec.start_time, spec.perturbation));
                break;
            case Regime::erratic_bot:
                out.push_back(make_erratic_bot(id, account_seed, spec.n_events, spec.start_time,
                                               spec.switch_points));
                break;
            case Regime::coordinated_group:
                out.push_back(make_coordinated(id, account_seed, tmpl, spec.start_time,
                                               spec.perturbation, spec.campaign));
                break;
        }
    }
    return out;
}

std::vector<AccountTimeline> generate_campaign(const CampaignSpec& spec) {
    RegimeSpec pos;
    pos.regime = Regime::coordinated_group;
    pos.n_accounts = spec.n_positive;
    pos.n_events = spec.n_events;
    pos.seed = spec.seed;
    pos.start_time = spec.start_time;
    pos.campaign = spec.name;
    pos.id_prefix = "io_" + spec.name + "_";
    auto accounts = generate(pos);

    RegimeSpec ctl;
    ctl.regime = Regime::stable_human;
    ctl.n_accounts = spec.n_controls;
    ctl.n_events = spec.n_events;
    ctl.seed = rng::derive_seed(spec.seed, "controls|" + spec.name);
    ctl.start_time = spec.start_time;
    ctl.id_prefix = "ctl_" + spec.name + "_";
    for (auto& a : generate(ctl)) {
        a.label = ingest::AccountLabel{ingest::Label::negative, ingest::Task::coordination,
                                       spec.name};
        accounts.push_back(std::move(a));
    }
    return accounts;
}

void write_events_file(const std::string& path,
                       const std::vector<AccountTimeline>& accounts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write event file: " + path);
    for (const auto& a : accounts) {
        for (const auto& ev : a.events) {
            out << "{\"account_id\":\"" << a.account_id << "\",\"timestamp\":" << ev.timestamp
                << ",\"action\":\"" << ingest::to_string(ev.action)
                << "\",\"text_terms\":" << ev.content.text_terms
                << ",\"links\":" << ev.content.links << ",\"hashtags\":" << ev.content.hashtags
                << ",\"media\":" << ev.content.media << ",\"mentions\":" << ev.content.mentions
                << "}\n";
        }
    }
}

void write_labels_file(const std::string& path,
                       const std::vector<AccountTimeline>& accounts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write label file: " + path);
    out << "account_id,label,task,campaign\n";
    for (const auto& a : accounts) {
        if (!a.label) continue;
        out << a.account_id << ',' << ingest::to_string(a.label->label) << ','
            << ingest::to_string(a.label->task) << ',' << a.label->campaign << '\n';
    }
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::stable_human: return "stable_human";
        case Regime::repetitive_bot: return "repetitive_bot";
        case Regime::erratic_bot: return "erratic_bot";
        case Regime::coordinated_group: return "coordinated_group";
    }
    return "?";
}

std::vector<std::string> regime_names() {
    return {"stable_human", "repetitive_bot", "erratic_bot", "coordinated_group"};
}

}  // namespace bchange::synth
