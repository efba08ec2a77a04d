#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "spde/errors.hpp"
#include "spde/field_io.hpp"

using namespace spde;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("spde_field_io_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e22, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(FieldIo, RoundTripIsExact) {
    const ThetaParams t(0.0, 1.0, 0.2);
    const SimGrid g{10, 16, 1.0, 32};
    const auto x0 = initial_coefficients(ParabolaInitial{4.2}, t, 32);
    const auto obs = simulate_observations(t, 0.1, g, x0, {{0.25, 0.5, 0.8125}, {0, 5, 10}}, {1, 0});
    const auto dir = scratch("roundtrip");
    write_field_observations(obs, dir);
    const auto back = read_field_observations(dir);
    EXPECT_TRUE(back == obs);
    std::ifstream in(dir / kSiteSliceFile);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.rfind("# slice=site_columns", 0), 0u);
}

TEST(FieldIo, MissingOrMalformedFilesRaiseIoError) {
    EXPECT_THROW(read_field_observations(scratch("missing")), IoError);
    const auto dir = scratch("malformed");
    fs::create_directories(dir);
    std::ofstream(dir / kSiteSliceFile) << "# slice=site_columns N=1 M=2 T=1\ni,t,0.5\n0,0,abc\n1,1,0\n";
    std::ofstream(dir / kRowSliceFile) << "# slice=time_rows N=1 M=2 T=1\ni,t,0.5,1\n0,0,0,0\n";
    EXPECT_THROW(read_field_observations(dir), IoError);
}
