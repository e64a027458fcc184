// Generated by tools/gen_daubechies.py. Do not edit by hand.

#include "daubechies_tables.hpp"

namespace rlsw::detail {

static constexpr double kExtremalPhase2[] = {
        0.48296291314453414337,
        0.83651630373780790558,
        0.22414386804201338103,
        -0.12940952255126038117};
static constexpr double kExtremalPhase3[] = {
        0.332670552950082616,
        0.80689150931109257649,
        0.4598775021184915701,
        -0.1350110200102545887,
        -0.085441273882026661693,
        0.035226291885709536603};
static constexpr double kExtremalPhase4[] = {
        0.23037781330889650086,
        0.71484657055291564709,
        0.63088076792985890788,
        -0.027983769416859854211,
        -0.18703481171909308408,
        0.030841381835560763627,
        0.032883011666885199735,
        -0.010597401785069032105};
static constexpr double kExtremalPhase5[] = {
        0.16010239797419291448,
        0.60382926979718967054,
        0.72430852843777292773,
        0.13842814590132073151,
        -0.24229488706638203186,
        -0.032244869584638374648,
        0.077571493840045713523,
        -0.0062414902127982742742,
        -0.012580751999081999469,
        0.003335725285473771278};
static constexpr double kExtremalPhase6[] = {
        0.11154074335010946362,
        0.49462389039845308568,
        0.75113390802109535068,
        0.31525035170919762909,
        -0.22626469396543982008,
        -0.12976686756726193556,
        0.097501605587323049102,
        0.027522865530305728626,
        -0.031582039317486029565,
        0.00055384220116149613925,
        0.0047772575109455106396,
        -0.0010773010853084795649};
static constexpr double kExtremalPhase7[] = {
        0.07785205408500917902,
        0.39653931948191730654,
        0.72913209084623511992,
        0.46978228740519312247,
        -0.14390600392856497541,
        -0.22403618499387498264,
        0.071309219266830264751,
        0.080612609151083071913,
        -0.03802993693501441358,
        -0.016574541630666880654,
        0.012550998556099840613,
        0.00042957797292136652113,
        -0.0018016407040474909153,
        0.00035371379997452024845};
static constexpr double kExtremalPhase8[] = {
        0.054415842243104009955,
        0.31287159091429997066,
        0.67563073629728980681,
        0.58535468365420671277,
        -0.015829105256349305667,
        -0.28401554296154692652,
        0.00047248457391328277036,
        0.12874742662047845886,
        -0.01736930100180754617,
        -0.044088253930794751507,
        0.013981027917398281649,
        0.0087460940474057767164,
        -0.0048703529934515743104,
        -0.0003917403733769470463,
        0.00067544940645056936637,
        -0.00011747678412476953373};
static constexpr double kExtremalPhase9[] = {
        0.038077947363878346589,
        0.24383467461259035373,
        0.6048231236901111119,
        0.65728807805130053808,
        0.13319738582500757619,
        -0.29327378327917490881,
        -0.096840783222976460514,
        0.14854074933810638014,
        0.030725681479333379212,
        -0.067632829061329973676,
        0.00025094711483145195759,
        0.022361662123679097205,
        -0.0047232047577513972779,
        -0.0042815036824634298345,
        0.0018476468830562264766,
        0.00023038576352319596721,
        -0.00025196318894271013697,
        3.9347320316271599481e-5};
static constexpr double kExtremalPhase10[] = {
        0.026670057900555553587,
        0.18817680007769148902,
        0.52720118893172558648,
        0.68845903945360356574,
        0.28117234366057746075,
        -0.24984642432731537942,
        -0.1959462743773770435,
        0.12736934033579326008,
        0.09305736460357235116,
        -0.071394147166397087145,
        -0.029457536821875812858,
        0.03321267405934100174,
        0.0036065535669561696554,
        -0.010733175483330575044,
        0.0013953517470529011658,
        0.0019924052951850561172,
        -0.00068585669495971162656,
        -0.00011646685512928545095,
        9.3588670320069591334e-5,
        -1.3264202894521244812e-5};

static constexpr double kLeastAsymmetric2[] = {
        0.48296291314453414337,
        0.83651630373780790558,
        0.22414386804201338103,
        -0.12940952255126038117};
static constexpr double kLeastAsymmetric3[] = {
        0.332670552950082616,
        0.80689150931109257649,
        0.4598775021184915701,
        -0.1350110200102545887,
        -0.085441273882026661693,
        0.035226291885709536603};
static constexpr double kLeastAsymmetric4[] = {
        0.032223100604051467872,
        -0.012603967262031303754,
        -0.099219543576633532585,
        0.2978577956053060514,
        0.80373875180513208088,
        0.49761866763277498998,
        -0.029635527646002491764,
        -0.075765714789502213228};
static constexpr double kLeastAsymmetric5[] = {
        0.027333068344998768818,
        0.02951949092570626125,
        -0.039134249302313843624,
        0.1993975339768555969,
        0.72340769040404079207,
        0.63397896345679206372,
        0.016602105764510848133,
        -0.17532808990805622424,
        -0.021101834024689041001,
        0.019538882735249826776};
static constexpr double kLeastAsymmetric6[] = {
        0.015404109327044824299,
        0.0034907120842221625153,
        -0.1179901111485200254,
        -0.048311742585698054971,
        0.49105594192797373304,
        0.78764114102865099607,
        0.33792942172816583271,
        -0.072637522786376583464,
        -0.021060292512370847992,
        0.044724901770781384663,
        0.001767711864254007741,
        -0.0078007083250323804142};
static constexpr double kLeastAsymmetric7[] = {
        0.012015419283549189053,
        0.017213376300804502861,
        -0.06490800354718848576,
        -0.064131289807385821039,
        0.36021846090626020101,
        0.78192159329172812499,
        0.48361091568226769662,
        -0.056804476889666969319,
        -0.10101092086842029949,
        0.044742349468352376652,
        0.020464207577546033667,
        -0.018126605131338460955,
        -0.0032832978474668107035,
        0.0022918339540537712112};
static constexpr double kLeastAsymmetric8[] = {
        0.0018899503327676891843,
        -0.00030292051472413308126,
        -0.014952258337062199118,
        0.0038087520138944894631,
        0.049137179673730286787,
        -0.027219029917103486322,
        -0.051945838107881800736,
        0.36444189483617893676,
        0.77718575169962802862,
        0.48135965125905339159,
        -0.061273359067811077843,
        -0.14329423835127266284,
        0.0076074873249766081919,
        0.031695087811525991431,
        -0.00054213233180001068935,
        -0.0033824159510050025955};
static constexpr double kLeastAsymmetric9[] = {
        0.0010694900329086119159,
        -0.00047315449868004354219,
        -0.010264064027633120485,
        0.0088592674934002666972,
        0.06207778930288574757,
        -0.01823377077939550557,
        -0.19155083129728433495,
        0.035272488035271042689,
        0.61733844914093415132,
        0.71789708276441240466,
        0.23876091460730516626,
        -0.054568958430833351097,
        0.00058346274612498183102,
        0.030224878858275188135,
        -0.011528210207679186143,
        -0.013271967781817133806,
        0.00061978088898550708094,
        0.0014009155259146562313};
static constexpr double kLeastAsymmetric10[] = {
        0.00086257822622597242902,
        0.00071542054205433971798,
        -0.0070567640625873042175,
        0.00059568278374251904276,
        0.049686126646942881579,
        0.026240365058448987227,
        -0.12155210554854894421,
        -0.01501923883913785974,
        0.51370987334802634488,
        0.766954836560609561,
        0.34021601302346215243,
        -0.087878711511975135017,
        -0.067089907808381801748,
        0.033842354663575221373,
        -0.00086875210968925813854,
        -0.023005461353497509884,
        -0.0011404297952173284664,
        0.0050716491985317990153,
        0.00034014926631480986305,
        -0.00041011591580439833378};

std::span<const double> extremal_phase_taps(int n) {
  switch (n) {
    case 2: return kExtremalPhase2;
    case 3: return kExtremalPhase3;
    case 4: return kExtremalPhase4;
    case 5: return kExtremalPhase5;
    case 6: return kExtremalPhase6;
    case 7: return kExtremalPhase7;
    case 8: return kExtremalPhase8;
    case 9: return kExtremalPhase9;
    case 10: return kExtremalPhase10;
    default: return {};
  }
}

std::span<const double> least_asymmetric_taps(int n) {
  switch (n) {
    case 2: return kLeastAsymmetric2;
    case 3: return kLeastAsymmetric3;
    case 4: return kLeastAsymmetric4;
    case 5: return kLeastAsymmetric5;
    case 6: return kLeastAsymmetric6;
    case 7: return kLeastAsymmetric7;
    case 8: return kLeastAsymmetric8;
    case 9: return kLeastAsymmetric9;
    case 10: return kLeastAsymmetric10;
    default: return {};
  }
}

}  // namespace rlsw::detail
