#pragma once

#include <array>
#include <string_view>

namespace elkies {

// First 100 ordinates of nontrivial zeta zeros, from mpmath.zetazero at 30-digit
// working precision, rounded to 18 significant digits.
inline constexpr std::string_view embedded_zeros_source = "mpmath.zetazero, n = 1..100";

inline constexpr std::array<double, 100> embedded_zeta_zeros = {
    14.1347251417346938, 21.022039638771555, 25.0108575801456888, 30.4248761258595132,
    32.9350615877391897, 37.5861781588256713, 40.9187190121474952, 43.3270732809149995,
    48.0051508811671597, 49.7738324776723022, 52.9703214777144606, 56.4462476970633948,
    59.3470440026023531, 60.8317785246098098, 65.1125440480816067, 67.0798105294941737,
    69.5464017111739793, 72.0671576744819076, 75.7046906990839332, 77.1448400688748054,
    79.3373750202493679, 82.9103808540860302, 84.7354929805170501, 87.4252746131252294,
    88.8091112076344654, 92.4918992705584843, 94.651344040519887, 95.8706342282453098,
    98.8311942181936922, 101.317851005731391, 103.725538040478339, 105.446623052326094,
    107.168611184276408, 111.029535543169675, 111.874659176992637, 114.320220915452713,
    116.226680320857554, 118.790782865976217, 121.370125002420646, 122.946829293552588,
    124.256818554345767, 127.516683879596495, 129.578704199956051, 131.087688530932657,
    133.497737202997586, 134.756509753373871, 138.116042054533443, 139.736208952121389,
    141.123707404021124, 143.111845807620633, 146.000982486765519, 147.422765342559602,
    150.05352042078488, 150.925257612241467, 153.024693811198896, 156.112909294237868,
    157.59759181759406, 158.849988171420499, 161.188964137596028, 163.030709687181987,
    165.537069187900419, 167.184439978174513, 169.094515415568821, 169.911976479411699,
    173.411536519591553, 174.754191523365726, 176.441434297710419, 178.377407776099977,
    179.916484020256996, 182.207078484366462, 184.874467848387509, 185.598783677707471,
    187.228922583501852, 189.416158656016937, 192.026656360713787, 193.079726603845704,
    195.265396679529235, 196.876481840958317, 198.015309676251912, 201.264751943703789,
    202.493594514140534, 204.189671803104554, 205.394697202163286, 207.90625888780621,
    209.57650971685626, 211.690862595365308, 213.347919359712666, 214.547044783491423,
    216.1695385082637, 219.067596349021379, 220.714918839314003, 221.430705554693339,
    224.007000254604335, 224.983324669582288, 227.421444279679291, 229.337413305525348,
    231.250188700499165, 231.987235253180249, 233.693404178908301, 236.524229665816206,
};

}  // namespace elkies
