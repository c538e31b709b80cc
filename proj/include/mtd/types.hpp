/*
* Copyright (C) 2026 The mtd Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef MTD_TYPES_HPP
#define MTD_TYPES_HPP

#include <Eigen/Dense>

#include <vector>

namespace mtd
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using PointList = std::vector<Vector>;

} // namespace mtd

#endif // MTD_TYPES_HPP
