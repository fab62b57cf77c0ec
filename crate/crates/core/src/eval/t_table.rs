// Two-sided Student t critical values t(1 - alpha/2, df) for df = 1..=200.

pub(super) const T_CRIT_001: [f64; 200] = [
    63.65674116287399, 9.92484320091807, 5.840909309733352, 4.604094871415897,
    4.032142983557536, 3.707428021324907, 3.4994832973505026, 3.3553873313333957,
    3.2498355415921254, 3.16927267261695, 3.1058065155392804, 3.0545395893929017,
    3.0122758387165773, 2.976842734370834, 2.9467128834859504, 2.920781622496036,
    2.8982305196347173, 2.878440472713585, 2.860934606449914, 2.845339709776814,
    2.831359558017186, 2.818756060596369, 2.8073356837675227, 2.796939504772804,
    2.787435813675851, 2.7787145333289134, 2.7706829571216756, 2.763262455461066,
    2.756385903670335, 2.7499956535670305, 2.7440419192941268, 2.738481482012083,
    2.733276642350758, 2.7283943670706616, 2.723805589208047, 2.719484630449974,
    2.715408721549962, 2.7115576019130625, 2.707913183517646, 2.7044592674331502,
    2.701181303578512, 2.6980661862199766, 2.695102079157669, 2.692278265693017,
    2.6895850193746385, 2.6870134922422126, 2.6845556178665215, 2.6822040269502136,
    2.67995197363155, 2.6777932709408425, 2.6757222341106464, 2.6737336306472184,
    2.6718226362410027, 2.669984795734891, 2.668215988486193, 2.6665123975560627,
    2.664870482241971, 2.663286953537658, 2.661758752162967, 2.6602830288550363,
    2.658857126653926, 2.657478564951156, 2.656145025099861, 2.6548543374110842,
    2.6536044693829246, 2.652393515028316, 2.651219685183657, 2.650081298694729,
    2.6489767743886263, 2.6479046237511508, 2.6468634442383916, 2.645851913159326,
    2.644868782073382, 2.6439128716530895, 2.642983066967393, 2.6420783131459915,
    2.6411976113892717, 2.6403400152921264, 2.63950462745322, 2.6386905963441825,
    2.637897113415776, 2.637123410420374, 2.6363687569321224, 2.6356324580479606,
    2.6349138522543054, 2.634212309445634, 2.633527229082496, 2.6328580384776448,
    2.6322041912000085, 2.631565165587158, 2.630940463357764, 2.630329608316288,
    2.6297321451428344, 2.6291476382617045, 2.628575670782743, 2.6280158435100693,
    2.627467774013252, 2.626931095756373, 2.6264054572808275, 2.6258905214380177,
    2.625385964668441, 2.624891476323912, 2.6244067580299553, 2.623931523085605,
    2.6234654958980834, 2.6230084114500203, 2.6225600147970334, 2.622120060593689,
    2.6216883126459782, 2.621264543488595, 2.6208485339854377, 2.620440072951842,
    2.6200389567971962, 2.6196449891866536, 2.6192579807207705, 2.618877748631969,
    2.6185041164968004, 2.618136913963057, 2.617775976490859, 2.617421145106866,
    2.617072266170864, 2.616729191153998, 2.616391776427972, 2.6160598830646076,
    2.615733376645151, 2.615412127078789, 2.6150960084298664, 2.61478489875331,
    2.61447867993781, 2.6141772375563477, 2.6138804607236517, 2.613588241960226,
    2.613300477062599, 2.6130170649794473, 2.612737907693308, 2.6124629101075767,
    2.612191979938513, 2.6119250276120067, 2.611661966164858, 2.6114027111503395,
    2.6111471805478264, 2.6108952946763013, 2.610646976111522, 2.61040214960669,
    2.610160742016442, 2.6099226822264048, 2.609687901078037, 2.6094563313030243,
    2.609227907462654, 2.6090025658841007, 2.6087802446012596, 2.608560883297947,
    2.608344423253348, 2.6081308072896223, 2.6079199797215513, 2.6077118863081523,
    2.607506474206159, 2.607303691925294, 2.6071034892852336, 2.6069058173742237,
    2.606710628509242, 2.6065178761976546, 2.6063275151003027, 2.60613950099595,
    2.6059537906167436, 2.605770342136419, 2.605589114356694, 2.605410067197838,
    2.6052331615388185, 2.6050583591888095, 2.6048856228597033, 2.604714916139602,
    2.604546203467224, 2.604379450107217, 2.604214622126315, 2.60405168637032,
    2.603890610441874, 2.603731362678984, 2.603573912134276, 2.6034182285549488,
    2.6032642823633956, 2.6031120446384715, 2.6029614870973843, 2.602812582078179,
    2.602665302522795, 2.6025196219606745, 2.6023755144929086, 2.602232954776884,
    2.6020919180114306, 2.601952379922437, 2.6018143167489227, 2.6016777052295534,
    2.601542522589576, 2.6014087465281603, 2.6012763552061373, 2.601145327234116,
    2.6010156416609598, 2.6008872779626224, 2.600760216031323, 2.600634436165038,
];

pub(super) const T_CRIT_005: [f64; 200] = [
    12.706204736432095, 4.302652729696142, 3.182446305284263, 2.7764451051977987,
    2.570581835636314, 2.4469118511449692, 2.3646242515927844, 2.306004135204166,
    2.2621571628540993, 2.2281388519649385, 2.200985160082949, 2.1788128296634177,
    2.1603686564610127, 2.1447866879169273, 2.131449545559323, 2.1199052992210112,
    2.1098155778331806, 2.10092204024096, 2.093024054408263, 2.0859634472658364,
    2.079613844727662, 2.0738730679040147, 2.0686576104190406, 2.0638985616280205,
    2.059538552753294, 2.055529438642871, 2.0518305164802833, 2.048407141795244,
    2.045229642132703, 2.0422724563012373, 2.0395134463964077, 2.036933343460101,
    2.0345152974493383, 2.032244509317718, 2.0301079282503425, 2.0280940009804502,
    2.0261924630291093, 2.024394163911969, 2.0226909200367604, 2.0210753903062733,
    2.019540970441376, 2.018081702818444, 2.016692199227824, 2.0153675744437636,
    2.014103388880846, 2.0128955989194286, 2.0117405137297655, 2.010634757624232,
    2.0095752371292397, 2.008559112100761, 2.007583770315836, 2.006646805061688,
    2.0057459953178687, 2.004879288188057, 2.004044783289146, 2.003240718847872,
    2.002465459291007, 2.0017174841452356, 2.0009953780882674, 2.00029782201426,
    1.9996235849949393, 1.9989715170333786, 1.998340542520741, 1.9977296543176926,
    1.9971379083920033, 1.9965644189523113, 1.9960083540252962, 1.9954689314298435,
    1.9949454151072374, 1.994437111771186, 1.993943367845625, 1.9934635666618716,
    1.992997125889855, 1.9925434951809322, 1.9921021540022417, 1.9916726096446642,
    1.9912543953883843, 1.9908470688116904, 1.9904502102301282, 1.9900634212544457,
    1.9896863234569024, 1.9893185571365721, 1.9889597801751624, 1.9886096669757087,
    1.9882679074772216, 1.9879342062390202, 1.9876082815890703, 1.987289864831169,
    1.986978699506281, 1.9866745407037676, 1.9863771544186173, 1.98608631695113,
    1.9858018143458234, 1.985523441866604, 1.9852510035091888, 1.9849843115310182,
    1.9847231860271193, 1.984467454426692, 1.9842169515086827, 1.9839715184496334,
    1.983731002885281, 1.98349525849594, 1.98326414470971, 1.9830375264229898,
    1.9828152737371543, 1.9825972617102907, 1.9823833701230174, 1.9821734832574511,
    1.981967489688474, 1.98176528208651, 1.9815667570310707, 1.9813718148344004,
    1.98118035937458, 1.9809922979375063, 1.9808075410672, 1.9806260024239375,
    1.9804475986497292, 1.9802722492407059, 1.980099876426006, 1.9799304050527766,
    1.9797637624769302, 1.979599878459331, 1.9794386850670895, 1.9792801165796825,
    1.979124109399617, 1.9789706019673934, 1.9788195346805206, 1.978670849816362,
    1.978524491458605, 1.9783804054271528, 1.9782385392112583, 1.9780988419057233,
    1.9779612641500013, 1.9778257580700527, 1.977692277222804, 1.9775607765430832,
    1.9774312122928936, 1.9773035420129161, 1.977177724476122, 1.9770537196433882,
    1.9769314886210219, 1.9768109936200895, 1.976692197917468, 1.9765750658185364,
    1.9764595626214159, 1.9763456545827003, 1.9762333088845878, 1.9761224936033632,
    1.976013177679155, 1.9759053308869137, 1.9757989238085503, 1.9756939278061865,
    1.9755903149964584, 1.9754880582258318, 1.9753871310468782, 1.9752875076954723,
    1.975189163068866, 1.975092072704601, 1.9749962127602252, 1.9749015599937718,
    1.974808091744976, 1.9747157859171878, 1.9746246209599578, 1.9745345758522654,
    1.9744456300863589, 1.9743577636521854, 1.9742709570223844, 1.9741851911378205,
    1.9741004473936334, 1.9740167076257822, 1.9739339540980687, 1.9738521694896134,
    1.973771336882769, 1.9736914397514558, 1.9736124619498971, 1.973534387701743,
    1.9734572015895642, 1.9733808885447028, 1.9733054338374663, 1.9732308230676485,
    1.9731570421553688, 1.9730840773322158, 1.973011915132679, 1.9729405423858688,
    1.9728699462074988, 1.9728001139921347, 1.9727310334056902, 1.9726626923781652,
    1.9725950790966154, 1.9725281819983447, 1.9724619897643145, 1.9723964913127592,
    1.9723316757930007, 1.972267532579456, 1.9722040512658325, 1.9721412216594967,
    1.9720790337760217, 1.9720174778338955, 1.971956544249395, 1.9718962236316089,
];

pub(super) const Z_CRIT_001: f64 = 2.5758293035489004;
pub(super) const Z_CRIT_005: f64 = 1.959963984540054;
