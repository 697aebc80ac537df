#pragma once

// Generated by tools/embed_data.py from data/*.csv. Do not edit.

#include <cstdint>
#include <string_view>

namespace sparsemix::builtin_data {

inline constexpr std::string_view k_iris = R"csv(sepal_length,sepal_width,petal_length,petal_width,species
5.1,3.5,1.4,0.2,1
4.9,3,1.4,0.2,1
4.7,3.2,1.3,0.2,1
4.6,3.1,1.5,0.2,1
5,3.6,1.4,0.2,1
5.4,3.9,1.7,0.4,1
4.6,3.4,1.4,0.3,1
5,3.4,1.5,0.2,1
4.4,2.9,1.4,0.2,1
4.9,3.1,1.5,0.1,1
5.4,3.7,1.5,0.2,1
4.8,3.4,1.6,0.2,1
4.8,3,1.4,0.1,1
4.3,3,1.1,0.1,1
5.8,4,1.2,0.2,1
5.7,4.4,1.5,0.4,1
5.4,3.9,1.3,0.4,1
5.1,3.5,1.4,0.3,1
5.7,3.8,1.7,0.3,1
5.1,3.8,1.5,0.3,1
5.4,3.4,1.7,0.2,1
5.1,3.7,1.5,0.4,1
4.6,3.6,1,0.2,1
5.1,3.3,1.7,0.5,1
4.8,3.4,1.9,0.2,1
5,3,1.6,0.2,1
5,3.4,1.6,0.4,1
5.2,3.5,1.5,0.2,1
5.2,3.4,1.4,0.2,1
4.7,3.2,1.6,0.2,1
4.8,3.1,1.6,0.2,1
5.4,3.4,1.5,0.4,1
5.2,4.1,1.5,0.1,1
5.5,4.2,1.4,0.2,1
4.9,3.1,1.5,0.2,1
5,3.2,1.2,0.2,1
5.5,3.5,1.3,0.2,1
4.9,3.6,1.4,0.1,1
4.4,3,1.3,0.2,1
5.1,3.4,1.5,0.2,1
5,3.5,1.3,0.3,1
4.5,2.3,1.3,0.3,1
4.4,3.2,1.3,0.2,1
5,3.5,1.6,0.6,1
5.1,3.8,1.9,0.4,1
4.8,3,1.4,0.3,1
5.1,3.8,1.6,0.2,1
4.6,3.2,1.4,0.2,1
5.3,3.7,1.5,0.2,1
5,3.3,1.4,0.2,1
7,3.2,4.7,1.4,2
6.4,3.2,4.5,1.5,2
6.9,3.1,4.9,1.5,2
5.5,2.3,4,1.3,2
6.5,2.8,4.6,1.5,2
5.7,2.8,4.5,1.3,2
6.3,3.3,4.7,1.6,2
4.9,2.4,3.3,1,2
6.6,2.9,4.6,1.3,2
5.2,2.7,3.9,1.4,2
5,2,3.5,1,2
5.9,3,4.2,1.5,2
6,2.2,4,1,2
6.1,2.9,4.7,1.4,2
5.6,2.9,3.6,1.3,2
6.7,3.1,4.4,1.4,2
5.6,3,4.5,1.5,2
5.8,2.7,4.1,1,2
6.2,2.2,4.5,1.5,2
5.6,2.5,3.9,1.1,2
5.9,3.2,4.8,1.8,2
6.1,2.8,4,1.3,2
6.3,2.5,4.9,1.5,2
6.1,2.8,4.7,1.2,2
6.4,2.9,4.3,1.3,2
6.6,3,4.4,1.4,2
6.8,2.8,4.8,1.4,2
6.7,3,5,1.7,2
6,2.9,4.5,1.5,2
5.7,2.6,3.5,1,2
5.5,2.4,3.8,1.1,2
5.5,2.4,3.7,1,2
5.8,2.7,3.9,1.2,2
6,2.7,5.1,1.6,2
5.4,3,4.5,1.5,2
6,3.4,4.5,1.6,2
6.7,3.1,4.7,1.5,2
6.3,2.3,4.4,1.3,2
5.6,3,4.1,1.3,2
5.5,2.5,4,1.3,2
5.5,2.6,4.4,1.2,2
6.1,3,4.6,1.4,2
5.8,2.6,4,1.2,2
5,2.3,3.3,1,2
5.6,2.7,4.2,1.3,2
5.7,3,4.2,1.2,2
5.7,2.9,4.2,1.3,2
6.2,2.9,4.3,1.3,2
5.1,2.5,3,1.1,2
5.7,2.8,4.1,1.3,2
6.3,3.3,6,2.5,3
5.8,2.7,5.1,1.9,3
7.1,3,5.9,2.1,3
6.3,2.9,5.6,1.8,3
6.5,3,5.8,2.2,3
7.6,3,6.6,2.1,3
4.9,2.5,4.5,1.7,3
7.3,2.9,6.3,1.8,3
6.7,2.5,5.8,1.8,3
7.2,3.6,6.1,2.5,3
6.5,3.2,5.1,2,3
6.4,2.7,5.3,1.9,3
6.8,3,5.5,2.1,3
5.7,2.5,5,2,3
5.8,2.8,5.1,2.4,3
6.4,3.2,5.3,2.3,3
6.5,3,5.5,1.8,3
7.7,3.8,6.7,2.2,3
7.7,2.6,6.9,2.3,3
6,2.2,5,1.5,3
6.9,3.2,5.7,2.3,3
5.6,2.8,4.9,2,3
7.7,2.8,6.7,2,3
6.3,2.7,4.9,1.8,3
6.7,3.3,5.7,2.1,3
7.2,3.2,6,1.8,3
6.2,2.8,4.8,1.8,3
6.1,3,4.9,1.8,3
6.4,2.8,5.6,2.1,3
7.2,3,5.8,1.6,3
7.4,2.8,6.1,1.9,3
7.9,3.8,6.4,2,3
6.4,2.8,5.6,2.2,3
6.3,2.8,5.1,1.5,3
6.1,2.6,5.6,1.4,3
7.7,3,6.1,2.3,3
6.3,3.4,5.6,2.4,3
6.4,3.1,5.5,1.8,3
6,3,4.8,1.8,3
6.9,3.1,5.4,2.1,3
6.7,3.1,5.6,2.4,3
6.9,3.1,5.1,2.3,3
5.8,2.7,5.1,1.9,3
6.8,3.2,5.9,2.3,3
6.7,3.3,5.7,2.5,3
6.7,3,5.2,2.3,3
6.3,2.5,5,1.9,3
6.5,3,5.2,2,3
6.2,3.4,5.4,2.3,3
5.9,3,5.1,1.8,3
)csv";
inline constexpr std::uint64_t k_iris_fnv1a = 0x77e5367a396c060aULL;

inline constexpr std::string_view k_crabs = R"csv(FL,RW,CL,CW,BD,group
8.1,6.7,16.1,19,7,1
8.8,7.7,18.1,20.8,7.4,1
9.2,7.8,19,22.4,7.7,1
9.6,7.9,20.1,23.1,8.2,1
9.8,8,20.3,23,8.2,1
10.8,9,23,26.5,9.8,1
11.1,9.9,23.8,27.1,9.8,1
11.6,9.1,24.5,28.4,10.4,1
11.8,9.6,24.2,27.8,9.7,1
11.8,10.5,25.2,29.3,10.3,1
12.2,10.8,27.3,31.6,10.9,1
12.3,11,26.8,31.5,11.4,1
12.6,10,27.7,31.7,11.4,1
12.8,10.2,27.2,31.8,10.9,1
12.8,10.9,27.4,31.5,11,1
12.9,11,26.8,30.9,11.4,1
13.1,10.6,28.2,32.3,11,1
13.1,10.9,28.3,32.4,11.2,1
13.3,11.1,27.8,32.3,11.3,1
13.9,11.1,29.2,33.3,12.1,1
14.3,11.6,31.3,35.5,12.7,1
14.6,11.3,31.9,36.4,13.7,1
15,10.9,31.4,36.4,13.2,1
15,11.5,32.4,37,13.4,1
15,11.9,32.5,37.2,13.6,1
15.2,12.1,32.3,36.7,13.6,1
15.4,11.8,33,37.5,13.6,1
15.7,12.6,35.8,40.3,14.5,1
15.9,12.7,34,38.9,14.2,1
16.1,11.6,33.8,39,14.4,1
16.1,12.8,34.9,40.7,15.7,1
16.2,13.3,36,41.7,15.4,1
16.3,12.7,35.6,40.9,14.9,1
16.4,13,35.7,41.8,15.2,1
16.6,13.5,38.1,43.4,14.9,1
16.8,12.8,36.2,41.8,14.9,1
16.9,13.2,37.3,42.7,15.6,1
17.1,12.6,36.4,42,15.1,1
17.1,12.7,36.7,41.9,15.6,1
17.2,13.5,37.6,43.9,16.1,1
17.7,13.6,38.7,44.5,16,1
17.9,14.1,39.7,44.6,16.8,1
18,13.7,39.2,44.4,16.2,1
18.8,15.8,42.1,49,17.8,1
19.3,13.5,41.6,47.4,17.8,1
19.3,13.8,40.9,46.5,16.8,1
19.7,15.3,41.9,48.5,17.8,1
19.8,14.2,43.2,49.7,18.6,1
19.8,14.3,42.4,48.9,18.3,1
21.3,15.7,47.1,54.6,20,1
7.2,6.5,14.7,17.1,6.1,2
9,8.5,19.3,22.7,7.7,2
9.1,8.1,18.5,21.6,7.7,2
9.1,8.2,19.2,22.2,7.7,2
9.5,8.2,19.6,22.4,7.8,2
9.8,8.9,20.4,23.9,8.8,2
10.1,9.3,20.9,24.4,8.4,2
10.3,9.5,21.3,24.7,8.9,2
10.4,9.7,21.7,25.4,8.3,2
10.8,9.5,22.5,26.3,9.1,2
11,9.8,22.5,25.7,8.2,2
11.2,10,22.8,26.9,9.4,2
11.5,11,24.7,29.2,10.1,2
11.6,11,24.6,28.5,10.4,2
11.6,11.4,23.7,27.7,10,2
11.7,10.6,24.9,28.5,10.4,2
11.9,11.4,26,30.1,10.9,2
12,10.7,24.6,28.9,10.5,2
12,11.1,25.4,29.2,11,2
12.6,12.2,26.1,31.6,11.2,2
12.8,11.7,27.1,31.2,11.9,2
12.8,12.2,26.7,31.1,11.1,2
12.8,12.2,27.9,31.9,11.5,2
13,11.4,27.3,31.8,11.3,2
13.1,11.5,27.6,32.6,11.1,2
13.2,12.2,27.9,32.1,11.5,2
13.4,11.8,28.4,32.7,11.7,2
13.7,12.5,28.6,33.8,11.9,2
13.9,13,30,34.9,13.1,2
14.7,12.5,30.1,34.7,12.5,2
14.9,13.2,30.1,35.6,12,2
15,13.8,31.7,36.9,14,2
15,14.2,32.8,37.4,14,2
15.1,13.3,31.8,36.3,13.5,2
15.1,13.5,31.9,37,13.8,2
15.1,13.8,31.7,36.6,13,2
15.2,14.3,33.9,38.5,14.7,2
15.3,14.2,32.6,38.3,13.8,2
15.4,13.3,32.4,37.6,13.8,2
15.5,13.8,33.4,38.7,14.7,2
15.6,13.9,32.8,37.9,13.4,2
15.6,14.7,33.9,39.5,14.3,2
15.7,13.9,33.6,38.5,14.1,2
15.8,15,34.5,40.3,15.3,2
16.2,15.2,34.5,40.1,13.9,2
16.4,14,34.2,39.8,15.2,2
16.7,16.1,36.6,41.9,15.4,2
17.4,16.9,38.2,44.1,16.6,2
17.5,16.7,38.6,44.5,17,2
19.2,16.5,40.9,47.9,18.1,2
9.1,6.9,16.7,18.6,7.4,3
10.2,8.2,20.2,22.2,9,3
10.7,8.6,20.7,22.7,9.2,3
11.4,9,22.7,24.8,10.1,3
12.5,9.4,23.2,26,10.8,3
12.5,9.4,24.2,27,11.2,3
12.7,10.4,26,28.8,12.1,3
13.2,11,27.1,30.4,12.2,3
13.4,10.1,26.6,29.6,12,3
13.7,11,27.5,30.5,12.2,3
14,11.5,29.2,32.2,13.1,3
14.1,10.4,28.9,31.8,13.5,3
14.1,10.5,29.1,31.6,13.1,3
14.1,10.7,28.7,31.9,13.3,3
14.2,10.6,28.7,31.7,12.9,3
14.2,10.7,27.8,30.9,12.7,3
14.2,11.3,29.2,32.2,13.5,3
14.6,11.3,29.9,33.5,12.8,3
14.7,11.1,29,32.1,13.1,3
15.1,11.4,30.2,33.3,14,3
15.1,11.5,30.9,34,13.9,3
15.4,11.1,30.2,33.6,13.5,3
15.7,12.2,31.7,34.2,14.2,3
16.2,11.8,32.3,35.3,14.7,3
16.3,11.6,31.6,34.2,14.5,3
17.1,12.6,35,38.9,15.7,3
17.4,12.8,36.1,39.5,16.2,3
17.5,12,34.4,37.3,15.3,3
17.5,12.7,34.6,38.4,16.1,3
17.8,12.5,36,39.8,16.7,3
17.9,12.9,36.9,40.9,16.5,3
18,13.4,36.7,41.3,17.1,3
18.2,13.7,38.8,42.7,17.2,3
18.4,13.4,37.9,42.2,17.7,3
18.6,13.4,37.8,41.9,17.3,3
18.6,13.5,36.9,40.2,17,3
18.8,13.4,37.2,41.1,17.5,3
18.8,13.8,39.2,43.3,17.9,3
19.4,14.1,39.1,43.2,17.8,3
19.4,14.4,39.8,44.3,17.9,3
20.1,13.7,40.6,44.5,18,3
20.6,14.4,42.8,46.5,19.6,3
21,15,42.9,47.2,19.4,3
21.5,15.5,45.5,49.7,20.9,3
21.6,15.4,45.7,49.7,20.6,3
21.6,14.8,43.4,48.2,20.1,3
21.9,15.7,45.4,51,21.1,3
22.1,15.8,44.6,49.6,20.5,3
23,16.8,47.2,52.1,21.5,3
23.1,15.7,47.6,52.8,21.6,3
10.7,9.7,21.4,24,9.8,4
11.4,9.2,21.7,24.1,9.7,4
12.5,10,24.1,27,10.9,4
12.6,11.5,25,28.1,11.5,4
12.9,11.2,25.8,29.1,11.9,4
14,11.9,27,31.4,12.6,4
14,12.8,28.8,32.4,12.7,4
14.3,12.2,28.1,31.8,12.5,4
14.7,13.2,29.6,33.4,12.9,4
14.9,13,30,33.7,13.3,4
15,12.3,30.1,33.3,14,4
15.6,13.5,31.2,35.1,14.1,4
15.6,14,31.6,35.3,13.8,4
15.6,14.1,31,34.5,13.8,4
15.7,13.6,31,34.8,13.8,4
16.1,13.6,31.6,36,14,4
16.1,13.7,31.4,36.1,13.9,4
16.2,14,31.6,35.6,13.7,4
16.7,14.3,32.3,37,14.7,4
17.1,14.5,33.1,37.2,14.6,4
17.5,14.3,34.5,39.6,15.6,4
17.5,14.4,34.5,39,16,4
17.5,14.7,33.3,37.6,14.6,4
17.6,14,34,38.6,15.5,4
18,14.9,34.7,39.5,15.7,4
18,16.3,37.9,43,17.2,4
18.3,15.7,35.1,40.5,16.1,4
18.4,15.5,35.6,40,15.9,4
18.4,15.7,36.5,41.6,16.4,4
18.5,14.6,37,42,16.6,4
18.6,14.5,34.7,39.4,15,4
18.8,15.2,35.8,40.5,16.6,4
18.9,16.7,36.3,41.7,15.3,4
19.1,16,37.8,42.3,16.8,4
19.1,16.3,37.9,42.6,17.2,4
19.7,16.7,39.9,43.6,18.2,4
19.9,16.6,39.4,43.9,17.9,4
19.9,17.9,40.1,46.4,17.9,4
20,16.7,40.4,45.1,17.7,4
20.1,17.2,39.8,44.1,18.6,4
20.3,16,39.4,44.1,18,4
20.5,17.5,40,45.5,19.2,4
20.6,17.5,41.5,46.2,19.2,4
20.9,16.5,39.9,44.7,17.5,4
21.3,18.4,43.8,48.4,20,4
21.4,18,41.2,46.2,18.7,4
21.7,17.1,41.7,47.2,19.6,4
21.9,17.2,42.6,47.4,19.5,4
22.5,17.2,43,48.7,19.8,4
23.1,20.2,46.2,52.5,21.1,4
)csv";
inline constexpr std::uint64_t k_crabs_fnv1a = 0xfc7a26183f44ce1aULL;

}  // namespace sparsemix::builtin_data
