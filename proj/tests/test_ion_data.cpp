#include <gtest/gtest.h>

#include <algorithm>

#include "reiqc/error.hpp"
#include "reiqc/ion_data.hpp"

using namespace reiqc;

namespace {
const IonDatabase& db() { return IonDatabase::embedded(); }
}  // namespace

TEST(IonData, EmbeddedTablesHaveAllIons) {
    const auto ions = db().ions();
    EXPECT_EQ(ions, (std::vector<std::string>{"Er3+", "Pr3+", "Tm3+"}));
    EXPECT_EQ(db().levels("Tm3+").size(), 5u);
    EXPECT_EQ(db().schemes().size(), 6u);
}

TEST(IonData, LevelLookup) {
    const auto& l = db().level("Pr3+", "3P0");
    EXPECT_DOUBLE_EQ(l.energy_cm1, 20469.0);
    EXPECT_DOUBLE_EQ(l.lifetime_us, 55.0);
    EXPECT_TRUE(db().level("Pr3+", "3H4").is_ground());
    EXPECT_THROW(db().level("Pr3+", "9Z9"), NotFoundError);
    EXPECT_THROW(db().levels("Xx3+"), NotFoundError);
}

TEST(IonData, JuddOfeltIsSymmetric) {
    const auto a = db().u_sq("Tm3+", "3H4", "1D2");
    const auto b = db().u_sq("Tm3+", "1D2", "3H4");
    EXPECT_EQ(a, b);
    EXPECT_DOUBLE_EQ(a.u2, 0.127);
    EXPECT_DOUBLE_EQ(a.u6, 0.228);
    EXPECT_DOUBLE_EQ(a.max(), 0.228);
}

TEST(IonData, DiagonalElementsAttachToLevels) {
    EXPECT_DOUBLE_EQ(db().level("Tm3+", "1I6").u2_diag_sq, 4.88);
    EXPECT_DOUBLE_EQ(db().level("Tm3+", "3H4").u2_diag_sq, 0.268);
}

TEST(IonData, SchemeResolution) {
    const auto s = db().load_scheme("Tm3+", 1);
    EXPECT_EQ(s.id(), "Tm3+/1");
    EXPECT_EQ(s.zero.label, "3H4");
    EXPECT_EQ(s.one.label, "1D2");
    EXPECT_EQ(s.aux.label, "1I6");
    EXPECT_EQ(s.ground.label, "3H6");
    EXPECT_FALSE(s.ground_is_aux());
    EXPECT_EQ(s.dimension(), 4);
    EXPECT_DOUBLE_EQ(transition_frequency(s, Role::zero, Role::aux), 34684.0 - 12518.0);
    EXPECT_DOUBLE_EQ(transition_frequency(s, Role::aux, Role::zero), 34684.0 - 12518.0);
}

TEST(IonData, GroundCanBeTheAuxiliaryLevel) {
    const auto s = db().load_scheme("Pr3+", 0);
    EXPECT_TRUE(s.ground_is_aux());
    EXPECT_EQ(s.dimension(), 3);
    EXPECT_EQ(s.local_index(Role::ground), s.local_index(Role::aux));
    EXPECT_EQ(scheme_transitions(s).size(), 3u);
    EXPECT_THROW(transition_frequency(s, Role::ground, Role::aux), ValidationError);
}

TEST(IonData, TransitionsAreEnumeratedInLocalOrder) {
    const auto s = db().load_scheme("Tm3+", 1);
    const auto t = scheme_transitions(s);
    ASSERT_EQ(t.size(), 6u);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_EQ(transition_index(s, t[k].a, t[k].b), static_cast<int>(k));
        EXPECT_EQ(transition_index(s, t[k].b, t[k].a), static_cast<int>(k));
        EXPECT_EQ(parse_transition(transition_name(t[k])), t[k]);
    }
}

TEST(IonData, UnknownSchemeIsNotFound) {
    EXPECT_THROW(db().load_scheme("Tm3+", 99), NotFoundError);
    EXPECT_THROW(db().load_scheme("Xx", 0), NotFoundError);
}

TEST(IonData, RoleNames) {
    for (Role r : kAllRoles) EXPECT_EQ(parse_role(role_name(r)), r);
    EXPECT_EQ(parse_role("aux"), Role::aux);
    EXPECT_THROW(parse_role("2"), ValidationError);
}

TEST(IonData, CanonicalIonNames) {
    EXPECT_EQ(canonical_ion_name("tm"), "Tm3+");
    EXPECT_EQ(canonical_ion_name("TM3+"), "Tm3+");
    EXPECT_EQ(canonical_ion_name("Pr3+"), "Pr3+");
}

TEST(IonData, SerializationRoundTrips) {
    const auto copy = IonDatabase::parse(db().serialize_levels(), db().serialize_judd_ofelt(), db().serialize_schemes());
    EXPECT_EQ(copy.serialize_levels(), db().serialize_levels());
    EXPECT_EQ(copy.serialize_judd_ofelt(), db().serialize_judd_ofelt());
    EXPECT_EQ(copy.serialize_schemes(), db().serialize_schemes());
    EXPECT_EQ(copy.u_sq("Er3+", "4I9/2", "4S3/2"), db().u_sq("Er3+", "4I9/2", "4S3/2"));
}

TEST(IonData, ParserRejectsBrokenTables) {
    const std::string levels = db().serialize_levels();
    const std::string jo = db().serialize_judd_ofelt();
    const std::string schemes = db().serialize_schemes();
    // Negative squared matrix element.
    std::string bad_jo = jo;
    const auto pos = bad_jo.find("0.127");
    ASSERT_NE(pos, std::string::npos);
    bad_jo.replace(pos, 5, "-0.12");
    EXPECT_THROW(IonDatabase::parse(levels, bad_jo, schemes), ValidationError);
    // Scheme naming an unknown level.
    EXPECT_THROW(IonDatabase::parse(levels, jo, schemes + "Tm3+,9,3H4,1D2,9Q9\n"), ValidationError);
    // Missing column.
    EXPECT_THROW(IonDatabase::parse("ion,level\nPr3+,3H4\n", jo, schemes), ValidationError);
}
