"""Reference values frozen from tests/oracles/generate.py (mpmath, 40 digits)."""

import mpmath as mp

# parsed at 40 digits; mp.mpf would otherwise round to the global 15
with mp.workdps(40):
    REF = {
        'theta4_0_0.1': mp.mpf('0.8001999980000001999999998'),
        'theta3_0.1': mp.mpf('1.2002000020000002'),
        'theta4_0.3_0.1': mp.mpf('0.8350053490233637171747684'),
        'theta4_0.2i_0.1': mp.mpf('0.7840530090002593879068163'),
        'eta_0.1': mp.mpf('0.8900100999989990000001'),
        'eta_0.5': mp.mpf('0.2887880950866024212788997'),
        'rrcf_0.01_20': mp.mpf('0.990099990099009999019702'),
        'zeta_2': mp.mpf('1.644934066848226436472415'),
        'zeta_0.5': mp.mpf('-1.460354508809586812889499'),
        'hurwitz_2_half': mp.mpf('4.934802200544679309417245'),
        'hurwitz_1.5_0.3': mp.mpf('8.237761671459723069763238'),
        'hurwitz_0.5_0.25': mp.mpf('0.2399635244956309553375743'),
        'L_x2_5_1_2_s2': mp.mpf('0.7062114032597409699310032'),
        'L_x2_5_1_2_s1': mp.mpf('0.4304089409640040388894332'),
        'L_alt_s2': mp.mpf('0.8224670334241132182362076'),
        'lambert_phi_plus_1': mp.mpf('0.5586427637246370857414191'),
        'prop2_x_1': mp.mpf('0.09720887469821693780752478'),
        'thm1_x_1_2': mp.mpf('1.26180616388314422978934'),
        'thm1_x2_1_2': mp.mpf('1.060255399656408807401085'),
        'prop45_mu_id': mp.mpf('0.9206735942077923189454135'),
        'lemma7_delta_1': mp.mpf('0.2689414213699951207488408'),
        'thm21_id_0.2': mp.mpf('1.29485400592559957602571'),
        'taylor_invfact_0.3': mp.mpf('0.3498588075760031039837443'),
        'mellin_ex1_s4': mp.mpf('1.951521171798732861231617'),
        'ex4_1.1': mp.mpf('2.770515096900571271165016'),
        'ex4_1.5': mp.mpf('4.268099771765718144013732'),
        'ex4_1.9': mp.mpf('20.08222708619834352736752'),
        'ex4_2.5': mp.mpf('-4.131688299420298312263247'),
        'ex4_3': mp.mpf('-2.295759576187022053500919'),
        'thm25_corrected_512_1': mp.mpf('-0.7079943296677573655505808'),
        'thm25_corrected_512_1.5': mp.mpf('-0.6986500933822211293585433'),
        'thm25_corrected_712_1': mp.mpf('-0.7845575772742600239553077'),
        'thm25_corrected_712_1.5': mp.mpf('-0.7496827348688742501969642'),
        'thm25_corrected_713_1': mp.mpf('-0.9845603938275653272462385'),
        'thm25_corrected_713_1.5': mp.mpf('-0.9020347478106116014759619'),
        'prop21_one_2.5': mp.mpf('3.294149693056780620807027'),
        'prop21_one_3.0': mp.mpf('1.977304350297296118197085'),
        'prop21_one_4.0': mp.mpf('1.951521171798732861231617'),
        'prop21_alt_2.5': mp.mpf('2.129491899954763788183236'),
        'prop21_alt_3.0': mp.mpf('1.482978262722972088647814'),
        'prop21_alt_4.0': mp.mpf('1.707581025323891253577665'),
        'prop21_x2_2.5': mp.mpf('1.946852219610741974372971'),
        'prop21_x2_3.0': mp.mpf('1.406130379845774012425531'),
        'prop21_x2_4.0': mp.mpf('1.675673855874052690240115'),
        'char_n2_512_0.5': mp.mpf('0.00108026073549635510260751'),
        'char_n2_712_0.5': mp.mpf('0.03578763523455504864213747'),
        'char_n2_713_0.5': mp.mpf('0.06448464242050419958393277'),
        'char_n2_512_1': mp.mpf('0.1551656753910012622866052'),
        'char_n2_712_1': mp.mpf('0.5062828035617920329002406'),
        'char_n2_713_1': mp.mpf('0.9014153431718882360194673'),
        'char_n2_512_2': mp.mpf('0.3524772830316351382140666'),
        'char_n2_712_2': mp.mpf('0.4163425701081513784385982'),
        'char_n2_713_2': mp.mpf('0.6138111596129140962604834'),
    }


def ref(key: str) -> float:
    return float(REF[key])
