#pragma once

// Connected-masses benchmark matrices (12 states, 3 inputs, Ts = 0.5 s),
// stored at full printed precision.

namespace rmpc::detail {

inline constexpr double kComa40A[12][12] = {
    {0.762721047593857, 0.114882546593898, 0.002476544740668, 0.000020938074941, 0.000000094222942, 0.000000000263060, 0.459613939727602, 0.019813111712880, 0.000251260056029, 0.000001507575068, 0.000000005261230, 0.000000000011999},
    {0.114882546593898, 0.765197592334525, 0.114903484668839, 0.002476638963610, 0.000020938338001, 0.000000094222942, 0.019813111712880, 0.459865199783630, 0.019814619287947, 0.000251265317259, 0.000001507587067, 0.000000005261230},
    {0.002476544740668, 0.114903484668839, 0.765197686557467, 0.114903484931899, 0.002476638963610, 0.000020938074941, 0.000251260056029, 0.019814619287947, 0.459865205044861, 0.019814619299947, 0.000251265317259, 0.000001507575068},
    {0.000020938074941, 0.002476638963610, 0.114903484931899, 0.765197686557467, 0.114903484668839, 0.002476544740668, 0.000001507575068, 0.000251265317259, 0.019814619299947, 0.459865205044861, 0.019814619287947, 0.000251260056029},
    {0.000000094222942, 0.000020938338001, 0.002476638963610, 0.114903484668839, 0.765197592334525, 0.114882546593898, 0.000000005261230, 0.000001507587067, 0.000251265317259, 0.019814619287947, 0.459865199783631, 0.019813111712880},
    {0.000000000263060, 0.000000094222942, 0.000020938074941, 0.002476544740668, 0.114882546593898, 0.762721047593857, 0.000000000011999, 0.000000005261230, 0.000001507575068, 0.000251260056029, 0.019813111712880, 0.459613939727602},
    {-0.899414767742325, 0.420238976357871, 0.019312099175890, 0.000248250167124, 0.000001497064606, 0.000000005237232, 0.762721047593857, 0.114882546593898, 0.002476544740668, 0.000020938074941, 0.000000094222942, 0.000000000263060},
    {0.420238976357871, -0.880102668566434, 0.420487226524995, 0.019313596240496, 0.000248255404355, 0.000001497064606, 0.114882546593898, 0.765197592334525, 0.114903484668839, 0.002476638963610, 0.000020938338001, 0.000000094222942},
    {0.019312099175890, 0.420487226524995, -0.880101171501828, 0.420487231762227, 0.019313596240496, 0.000248250167124, 0.002476544740668, 0.114903484668839, 0.765197686557467, 0.114903484931899, 0.002476638963610, 0.000020938074941},
    {0.000248250167124, 0.019313596240496, 0.420487231762227, -0.880101171501828, 0.420487226524995, 0.019312099175890, 0.000020938074941, 0.002476638963610, 0.114903484931899, 0.765197686557467, 0.114903484668839, 0.002476544740668},
    {0.000001497064606, 0.000248255404355, 0.019313596240496, 0.420487226524995, -0.880102668566434, 0.420238976357871, 0.000000094222942, 0.000020938338001, 0.002476638963610, 0.114903484668839, 0.765197592334525, 0.114882546593898},
    {0.000000005237232, 0.000001497064606, 0.000248250167124, 0.019312099175890, 0.420238976357871, -0.899414767742325, 0.000000000263060, 0.000000094222942, 0.000020938074941, 0.002476544740668, 0.114882546593898, 0.762721047593857}};

inline constexpr double kComa40B[12][3] = {
    {0.117380123896010, 0.000021127047947, 0.000000094750065},
    {-0.117401251208021, 0.002518704613621, 0.000021127312010},
    {-0.002497672052678, 0.119898828510133, 0.002518704614624},
    {-0.000021032825507, 0.000000000000501, 0.119898828774196},
    {-0.000000094487005, -0.119898828246070, 0.000000094750566},
    {-0.000000000263561, -0.002518609863556, -0.119877701198123},
    {0.439800828014722, 0.000251254794798, 0.000001507563068},
    {-0.440052088070751, 0.019813111700880, 0.000251260056029},
    {-0.019563359231919, 0.459613939727602, 0.019813111724879},
    {-0.000249757742191, 0.000000000011999, 0.459613944988832},
    {-0.000001502325837, -0.459613934466372, 0.000001507575068},
    {-0.000000005249231, -0.019811604137812, -0.459362679671573}};

}  // namespace rmpc::detail
