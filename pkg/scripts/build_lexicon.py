#!/usr/bin/env python3
"""Regenerate the packaged pronunciation lexicon (tones.tsv, rhymes.tsv).

The source of truth is SYLLABLE_CHARS below: a curated table mapping a
toned pinyin syllable to the characters that carry that reading.
Polyphonic characters appear under several syllables on purpose.

Tone digits 1-2 are the level (ping) category, 3-4 the oblique (ze)
category. Rhyme groups are derived from the syllable final through the
thirteen-class mapping in FINAL_TO_RHYME_CLASS, then split by tonal
section, giving group ids like ``fahua.ping``. The u and ü finals are
merged into one class, which approximates how classical ci rhyme
dictionaries group that vowel pair; the overall table is a documented
modern-Mandarin approximation, not a scholarly edition.

Usage: python scripts/build_lexicon.py [--check-corpus]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "poetone" / "data"

FINAL_TO_RHYME_CLASS = {
    "a": "fahua", "ia": "fahua", "ua": "fahua",
    "o": "suopo", "e": "suopo", "uo": "suopo",
    "ie": "miexie", "üe": "miexie",
    "i": "yiqi", "er": "yiqi",
    "u": "gusu", "ü": "gusu",
    "ai": "huailai", "uai": "huailai",
    "ei": "huidui", "uei": "huidui",
    "ao": "yaotiao", "iao": "yaotiao",
    "ou": "youqiu", "iou": "youqiu",
    "an": "yanqian", "ian": "yanqian", "uan": "yanqian", "üan": "yanqian",
    "en": "renchen", "in": "renchen", "uen": "renchen", "ün": "renchen",
    "ang": "jiangyang", "iang": "jiangyang", "uang": "jiangyang",
    "eng": "zhongdong", "ing": "zhongdong", "ueng": "zhongdong",
    "ong": "zhongdong", "iong": "zhongdong",
}

_INITIALS = (
    "zh", "ch", "sh",
    "b", "p", "m", "f", "d", "t", "n", "l",
    "g", "k", "h", "j", "q", "x", "r", "z", "c", "s",
)

_Y_FORMS = {
    "yi": "i", "yin": "in", "ying": "ing",
    "ya": "ia", "ye": "ie", "yao": "iao", "you": "iou",
    "yan": "ian", "yang": "iang", "yong": "iong",
    "yu": "ü", "yue": "üe", "yuan": "üan", "yun": "ün",
    "yo": "o",
}


def syllable_final(syllable: str) -> str:
    """Extract the normalized final of a bare (untoned) pinyin syllable."""
    s = syllable.replace("v", "ü")
    if s.startswith("w"):
        body = "u" if s == "wu" else "u" + s[1:]
        return "uen" if body == "uen" else body
    if s.startswith("y"):
        if s in _Y_FORMS:
            return _Y_FORMS[s]
        raise ValueError(f"unrecognized y-syllable {syllable!r}")
    initial = ""
    for cand in _INITIALS:
        if s.startswith(cand):
            initial = cand
            break
    body = s[len(initial):]
    if initial in ("j", "q", "x"):
        if body == "u":
            body = "ü"
        elif body.startswith("u"):
            body = "ü" + body[1:]
    if body == "iu":
        body = "iou"
    elif body == "ui":
        body = "uei"
    elif body == "un":
        body = "ün" if initial in ("j", "q", "x") else "uen"
    if body not in FINAL_TO_RHYME_CLASS:
        raise ValueError(f"unmapped final {body!r} from syllable {syllable!r}")
    return body


# Curated readings. Keep each entry to characters whose reading is certain;
# accuracy beats coverage here. Tone 5 marks the neutral tone.
SYLLABLE_CHARS: dict[str, str] = {
    # fahua: a / ia / ua
    "ba1": "八巴芭疤", "ba2": "拔跋", "ba3": "把靶", "ba4": "爸罢霸坝", "ba5": "吧",
    "pa1": "趴", "pa2": "爬", "pa4": "怕帕",
    "ma1": "妈", "ma2": "麻", "ma3": "马码蚂", "ma4": "骂", "ma5": "吗嘛",
    "fa1": "发", "fa2": "乏罚伐筏阀", "fa3": "法", "fa4": "发",
    "da1": "搭", "da2": "达答", "da3": "打", "da4": "大",
    "ta1": "他她它塌", "ta3": "塔", "ta4": "踏榻",
    "na2": "拿", "na3": "哪", "na4": "那纳钠",
    "la1": "拉啦", "la4": "辣腊蜡落",
    "ha1": "哈",
    "zha1": "渣扎", "zha2": "闸", "zha4": "炸诈乍榨",
    "cha1": "插叉差", "cha2": "茶查察", "cha4": "岔诧差",
    "sha1": "沙纱杀砂", "sha3": "傻", "sha4": "厦",
    "za1": "扎", "za2": "杂砸",
    "ca1": "擦",
    "gua1": "瓜刮", "gua3": "寡", "gua4": "挂褂",
    "kua1": "夸", "kua3": "垮", "kua4": "跨胯",
    "hua1": "花", "hua2": "华滑划", "hua4": "画话化划",
    "zhua1": "抓",
    "shua1": "刷", "shua3": "耍",
    "jia1": "家加佳嘉夹", "jia2": "夹颊", "jia3": "甲假贾", "jia4": "价架驾嫁假",
    "qia1": "掐", "qia4": "恰洽",
    "xia1": "虾瞎", "xia2": "霞峡侠狭暇", "xia4": "下夏吓",
    "ya1": "压鸦鸭押", "ya2": "牙芽崖涯", "ya3": "雅哑", "ya4": "亚讶",
    "wa1": "挖蛙洼", "wa2": "娃", "wa3": "瓦", "wa4": "袜",
    # suopo: o / e / uo
    "bo1": "波播拨玻菠", "bo2": "伯博泊勃薄帛舶脖", "bo3": "跛",
    "po1": "坡泼颇", "po2": "婆", "po4": "破迫魄",
    "mo1": "摸", "mo2": "磨摩模膜魔蘑", "mo4": "寞漠莫沫墨末茉陌默磨",
    "fo2": "佛",
    "e2": "鹅蛾额俄", "e4": "恶饿扼",
    "de2": "得德", "de5": "的地得",
    "le4": "乐勒", "le5": "了",
    "ge1": "歌哥鸽割搁胳", "ge2": "格隔阁革葛", "ge4": "个各",
    "ke1": "科棵颗柯苛磕", "ke2": "咳壳", "ke3": "可渴", "ke4": "克刻客课",
    "he1": "喝呵", "he2": "何河和合盒荷核禾", "he4": "贺荷吓赫鹤和",
    "ze2": "则择泽责", "ze4": "仄",
    "ce4": "侧测策册厕",
    "se4": "色涩瑟塞",
    "zhe1": "遮", "zhe2": "折哲辙", "zhe3": "者", "zhe4": "这浙", "zhe5": "着",
    "che1": "车", "che3": "扯", "che4": "彻撤澈",
    "she1": "奢", "she2": "舌蛇折", "she3": "舍", "she4": "社射摄涉设舍",
    "re3": "惹", "re4": "热",
    "duo1": "多", "duo2": "夺", "duo3": "朵躲", "duo4": "堕舵惰",
    "tuo1": "拖托脱", "tuo2": "驼陀", "tuo3": "妥椭", "tuo4": "拓唾",
    "nuo2": "挪", "nuo4": "诺糯懦",
    "luo2": "罗萝锣螺逻", "luo3": "裸", "luo4": "落洛络骆烙",
    "guo1": "锅郭聒", "guo2": "国", "guo3": "果裹", "guo4": "过",
    "kuo4": "阔扩括廓",
    "huo2": "活", "huo3": "火伙", "huo4": "或货获祸惑霍",
    "zhuo1": "桌捉拙", "zhuo2": "浊著酌灼卓琢",
    "chuo4": "绰辍",
    "shuo1": "说", "shuo4": "硕朔数",
    "ruo4": "若弱",
    "zuo2": "昨", "zuo3": "左", "zuo4": "作坐座做",
    "cuo1": "搓磋撮", "cuo4": "错挫措",
    "suo1": "梭蓑缩唆娑", "suo3": "所索锁琐",
    "wo1": "窝蜗涡", "wo3": "我", "wo4": "卧握沃",
    # miexie: ie / üe
    "bie1": "憋鳖", "bie2": "别", "bie3": "瘪",
    "pie1": "撇瞥",
    "mie4": "灭蔑",
    "die1": "爹跌", "die2": "叠碟蝶迭谍",
    "tie1": "贴", "tie3": "铁帖", "tie4": "帖",
    "nie1": "捏", "nie4": "聂镊孽",
    "lie4": "列烈裂猎劣",
    "jie1": "接街阶皆嗟揭秸结", "jie2": "节结杰洁截捷竭睫劫",
    "jie3": "姐解", "jie4": "界借介戒届芥诫解",
    "qie1": "切", "qie2": "茄", "qie3": "且", "qie4": "切妾怯窃惬",
    "xie1": "些歇楔蝎", "xie2": "斜鞋协挟携谐邪胁",
    "xie3": "写血", "xie4": "泻谢卸屑械懈泄蟹",
    "ye1": "椰噎", "ye2": "爷耶", "ye3": "也野冶", "ye4": "夜叶页业液腋曳",
    "yue1": "约曰", "yue4": "月越岳悦阅跃钥乐粤",
    "jue1": "撅", "jue2": "觉绝决角爵掘倔诀崛嚼",
    "que1": "缺阙", "que2": "瘸", "que4": "却确雀鹊榷",
    "xue1": "削靴薛", "xue2": "学穴", "xue3": "雪", "xue4": "血",
    "lve4": "略掠", "nve4": "虐疟",
    # yiqi: i / er (incl. the buzzed -i of zhi/chi/shi/ri/zi/ci/si)
    "yi1": "一衣医依伊壹揖",
    "yi2": "宜移疑仪夷姨遗怡颐",
    "yi3": "已以倚椅乙蚁矣",
    "yi4": "意义易艺亿忆议异译抑役疫亦裔谊毅翼逸驿邑溢轶",
    "bi1": "逼", "bi2": "鼻", "bi3": "比笔彼鄙匕",
    "bi4": "必闭壁避臂毕碧币弊蔽痹辟陛庇",
    "pi1": "批披劈霹坯", "pi2": "皮疲脾琵枇啤", "pi3": "匹痞癖", "pi4": "僻譬屁",
    "mi1": "眯", "mi2": "迷谜弥靡糜", "mi3": "米", "mi4": "密蜜秘觅泌",
    "di1": "低滴堤", "di2": "敌笛迪涤狄嫡", "di3": "底抵邸诋", "di4": "地第帝弟递缔蒂的",
    "ti1": "梯踢剔", "ti2": "提题啼蹄", "ti3": "体", "ti4": "替剃涕惕屉",
    "ni1": "妮", "ni2": "泥尼倪霓", "ni3": "你拟", "ni4": "腻逆匿溺昵泥",
    "li2": "离梨犁黎璃狸漓篱厘罹",
    "li3": "里理李礼鲤俚",
    "li4": "力利立例历厉丽励吏莉栗粒沥隶俐痢荔",
    "ji1": "机鸡基激击积圾肌饥讥矶畸箕稽姬缉羁",
    "ji2": "及级极即急集籍疾辑吉嫉棘脊汲",
    "ji3": "几己挤给戟",
    "ji4": "寂计记济技际季既纪继寄祭忌剂悸妓荠暨冀",
    "qi1": "七期欺妻漆栖戚凄沏柒",
    "qi2": "其奇骑旗齐棋歧祈祁脐崎畦鳍麒",
    "qi3": "起启乞岂企绮杞",
    "qi4": "气器弃汽泣契砌憩讫迄",
    "xi1": "西夕希息吸悉析惜昔熙溪锡牺稀晰嘻膝熄蟋羲曦奚",
    "xi2": "席习袭媳檄", "xi3": "洗喜徙玺", "xi4": "细系戏隙",
    "zhi1": "之只知枝支芝肢织汁蜘脂吱",
    "zhi2": "直值植职执殖侄掷",
    "zhi3": "只止指纸址旨咫趾",
    "zhi4": "至治制志智置致秩峙帜窒挚稚滞痔炙识",
    "chi1": "吃痴嗤", "chi2": "持池迟驰弛匙", "chi3": "尺耻齿侈", "chi4": "赤斥翅炽叱",
    "shi1": "诗师施湿失狮尸虱",
    "shi2": "时十石拾食识实什蚀",
    "shi3": "史使始驶屎矢",
    "shi4": "是似市事世士视试室示式释适誓逝势侍饰恃嗜拭轼仕噬柿",
    "ri4": "日",
    "zi1": "资姿滋兹咨孜", "zi3": "子紫仔姊籽梓滓", "zi4": "自字恣",
    "ci1": "疵", "ci2": "词辞慈磁瓷祠茨雌", "ci3": "此", "ci4": "次刺赐伺",
    "si1": "思丝私司斯撕嘶厮", "si3": "死", "si4": "四似寺肆伺饲嗣祀",
    "er2": "而儿", "er3": "耳尔饵迩", "er4": "二贰",
    # gusu: u / ü
    "bu3": "补捕卜哺", "bu4": "不布步部簿埠怖",
    "pu1": "扑铺仆", "pu2": "仆菩葡蒲璞", "pu3": "普谱浦圃朴", "pu4": "铺瀑曝",
    "mu3": "母亩牡姆拇", "mu4": "目木暮墓幕慕牧募睦穆沐",
    "fu1": "夫肤敷孵",
    "fu2": "浮佛扶服福幅符伏俘拂袱芙辐",
    "fu3": "府腐辅抚斧甫俯脯釜腑",
    "fu4": "负父付富副复妇赴附腹覆赋傅缚讣阜",
    "du1": "都督", "du2": "独读毒渎犊牍", "du3": "堵赌睹笃", "du4": "妒度渡肚杜镀",
    "tu1": "突秃凸", "tu2": "图途徒涂屠", "tu3": "土吐", "tu4": "兔吐",
    "nu2": "奴", "nu3": "努弩", "nu4": "怒",
    "lu2": "炉庐芦颅鲈卢", "lu3": "鲁卤虏掳橹", "lu4": "路露鹿录陆绿碌赂麓",
    "gu1": "孤姑估沽辜菇咕", "gu3": "古股骨鼓谷蛊贾", "gu4": "故顾固雇锢",
    "ku1": "哭枯窟", "ku3": "苦", "ku4": "裤库酷",
    "hu1": "呼忽乎惚", "hu2": "湖胡壶葫狐蝴弧糊", "hu3": "虎唬琥", "hu4": "户护互沪",
    "zhu1": "珠朱株诸猪蛛茱铢", "zhu2": "竹烛逐竺",
    "zhu3": "主煮嘱瞩拄", "zhu4": "住著助注驻柱筑祝铸蛀贮伫箸",
    "chu1": "初出", "chu2": "除厨锄雏橱", "chu3": "楚处础储杵", "chu4": "处触畜绌黜",
    "shu1": "书疏舒叔殊输梳淑抒枢蔬倏姝", "shu2": "熟赎孰塾",
    "shu3": "数属鼠署薯暑蜀黍曙", "shu4": "戍数树术述束竖恕庶墅漱",
    "ru2": "如儒孺茹蠕", "ru3": "乳汝辱", "ru4": "入褥",
    "zu1": "租", "zu2": "足族卒", "zu3": "组祖阻诅",
    "cu1": "粗", "cu4": "促醋簇猝",
    "su1": "苏酥簌稣", "su2": "俗", "su4": "素速宿诉肃塑溯粟夙",
    "wu1": "屋乌污巫呜诬钨", "wu2": "无吴梧芜蜈毋吾",
    "wu3": "五午舞武伍侮捂鹉妩", "wu4": "误雾物务悟勿坞戊兀晤",
    "ju1": "居车拘驹鞠疽掬", "ju2": "局菊橘桔", "ju3": "举矩咀沮",
    "ju4": "句具据距巨剧聚惧俱拒炬踞锯遽",
    "qu1": "曲区驱屈趋躯岖蛆", "qu2": "渠", "qu3": "取曲娶龋", "qu4": "去趣觑",
    "xu1": "须需虚嘘墟戌吁", "xu2": "徐", "xu3": "许栩诩", "xu4": "序叙绪续蓄畜酗恤旭婿",
    "yu1": "迂淤",
    "yu2": "于余鱼渔愚娱愉逾渝榆虞舆隅竽纡妤",
    "yu3": "雨语与屿宇羽禹",
    "yu4": "玉欲遇域育狱浴预誉愈御裕驭妪郁喻寓峪毓谕语",
    # huailai: ai / uai
    "bai1": "掰", "bai2": "白", "bai3": "百柏摆佰", "bai4": "败拜稗",
    "pai1": "拍", "pai2": "排牌徘", "pai4": "派湃",
    "mai2": "埋霾", "mai3": "买", "mai4": "卖麦迈脉",
    "dai1": "呆待", "dai3": "歹逮", "dai4": "代带待戴贷袋怠殆黛玳岱",
    "tai1": "胎", "tai2": "台抬苔", "tai4": "太态泰汰",
    "nai3": "乃奶", "nai4": "奈耐",
    "lai2": "来莱", "lai4": "赖癞籁睐",
    "gai1": "该", "gai3": "改", "gai4": "盖概钙溉丐",
    "kai1": "开揩", "kai3": "凯慨楷铠",
    "hai2": "还孩骸", "hai3": "海", "hai4": "害亥骇",
    "zhai1": "摘斋", "zhai2": "宅翟", "zhai3": "窄", "zhai4": "债寨",
    "chai1": "拆钗差", "chai2": "柴豺",
    "shai1": "筛", "shai4": "晒",
    "zai1": "栽灾哉", "zai3": "宰载", "zai4": "在再载",
    "cai1": "猜", "cai2": "才材财裁", "cai3": "采彩踩睬", "cai4": "菜蔡",
    "sai1": "塞腮鳃", "sai4": "塞赛",
    "ai1": "哀埃挨唉", "ai2": "挨癌皑", "ai3": "矮蔼霭", "ai4": "爱碍艾隘暧",
    "guai1": "乖", "guai3": "拐", "guai4": "怪",
    "kuai4": "快块筷脍",
    "huai2": "怀淮徊槐踝", "huai4": "坏",
    "shuai1": "衰摔", "shuai3": "甩", "shuai4": "帅率",
    "wai1": "歪", "wai4": "外",
    "zhuai4": "拽",
    # huidui: ei / uei
    "bei1": "杯悲卑碑背", "bei3": "北", "bei4": "被备倍背辈贝惫悖狈焙",
    "pei1": "胚", "pei2": "陪培赔裴", "pei4": "配佩沛",
    "mei2": "梅没媒眉煤玫枚霉莓楣", "mei3": "美每镁", "mei4": "媚寐妹昧魅袂",
    "fei1": "飞非妃菲扉啡绯霏", "fei2": "肥", "fei3": "匪诽斐翡", "fei4": "费废肺沸吠",
    "dei3": "得",
    "nei4": "内",
    "lei1": "勒", "lei2": "雷擂镭", "lei3": "垒累蕾磊", "lei4": "泪类累肋酹",
    "gui1": "归规硅瑰龟闺圭", "gui3": "鬼轨诡", "gui4": "贵桂柜跪",
    "kui1": "亏窥盔", "kui2": "葵魁奎", "kui3": "傀", "kui4": "愧溃馈匮",
    "hui1": "挥辉灰恢徽晖麾诙", "hui2": "回茴洄蛔", "hui3": "悔毁",
    "hui4": "会惠慧汇绘贿秽晦讳诲荟卉彗蕙",
    "zhui1": "追锥椎", "zhui4": "坠缀赘惴",
    "chui1": "吹炊", "chui2": "垂锤捶陲槌",
    "shui2": "谁", "shui3": "水", "shui4": "睡税说",
    "rui3": "蕊", "rui4": "锐瑞睿芮",
    "zui3": "嘴", "zui4": "最醉罪",
    "cui1": "催摧崔", "cui4": "翠脆粹萃淬瘁悴",
    "sui1": "虽", "sui2": "随隋绥", "sui3": "髓", "sui4": "岁遂碎穗隧祟邃",
    "wei1": "威微危巍偎薇煨",
    "wei2": "为围唯维惟违桅帷韦潍",
    "wei3": "尾伟委纬伪萎苇炜玮娓诿",
    "wei4": "为位未味卫谓喂魏畏慰尉蔚渭",
    "dui1": "堆", "dui4": "对队兑怼",
    "tui1": "推", "tui2": "颓", "tui3": "腿", "tui4": "退蜕褪",
    # yaotiao: ao / iao
    "bao1": "包胞苞褒剥", "bao2": "薄雹", "bao3": "宝保饱堡葆", "bao4": "报抱爆暴豹刨鲍",
    "pao1": "抛泡", "pao2": "袍咆刨炮", "pao3": "跑", "pao4": "炮泡疱",
    "mao1": "猫", "mao2": "毛矛茅锚髦牦", "mao3": "卯铆", "mao4": "冒帽貌贸茂",
    "dao1": "刀叨", "dao3": "导岛倒捣祷蹈", "dao4": "到道倒盗稻悼",
    "tao1": "涛掏滔韬绦", "tao2": "桃逃陶淘萄", "tao3": "讨", "tao4": "套",
    "nao2": "挠铙", "nao3": "脑恼瑙", "nao4": "闹淖",
    "lao1": "捞", "lao2": "劳牢唠痨", "lao3": "老佬姥潦", "lao4": "落烙涝酪",
    "gao1": "高糕膏篙羔皋", "gao3": "搞稿镐", "gao4": "告诰",
    "kao3": "考烤拷", "kao4": "靠犒",
    "hao1": "蒿薅", "hao2": "豪毫壕嚎号", "hao3": "好", "hao4": "好号浩耗皓昊",
    "zhao1": "招朝昭钊着", "zhao2": "着", "zhao3": "找沼爪", "zhao4": "照赵兆罩肇召诏",
    "chao1": "超抄钞", "chao2": "朝潮巢嘲", "chao3": "吵炒",
    "shao1": "烧稍捎梢鞘筲", "shao2": "勺芍韶", "shao3": "少", "shao4": "少绍哨邵",
    "rao2": "饶", "rao3": "扰", "rao4": "绕",
    "zao1": "遭糟", "zao2": "凿", "zao3": "早枣澡藻蚤", "zao4": "造灶燥躁皂噪",
    "cao1": "操糙", "cao2": "曹槽漕嘈", "cao3": "草",
    "sao1": "缫骚搔臊", "sao3": "扫嫂", "sao4": "扫",
    "ao2": "熬翱遨", "ao3": "袄", "ao4": "奥傲澳懊",
    "biao1": "标彪膘镖飙", "biao3": "表裱",
    "piao1": "飘漂缥剽", "piao2": "瓢", "piao3": "漂缥瞟", "piao4": "票漂",
    "miao2": "苗描瞄", "miao3": "缈秒渺藐淼", "miao4": "妙庙",
    "diao1": "叼雕凋刁碉貂", "diao4": "调掉吊钓",
    "tiao1": "挑佻", "tiao2": "条调迢", "tiao3": "挑", "tiao4": "跳眺",
    "niao3": "鸟袅", "niao4": "尿",
    "liao2": "辽疗聊僚燎寥嘹缭撩", "liao3": "了蓼燎", "liao4": "料廖撂镣",
    "jiao1": "交教郊浇骄娇焦胶椒礁蕉跤鲛", "jiao2": "嚼",
    "jiao3": "角脚搅狡饺绞剿矫皎铰侥缴佼",
    "jiao4": "叫教较觉轿校窖酵",
    "qiao1": "敲悄锹跷橇", "qiao2": "桥乔侨瞧憔樵翘", "qiao3": "巧悄雀",
    "qiao4": "鞘俏窍翘壳峭撬诮",
    "xiao1": "霄销消宵萧箫硝潇逍枭骁嚣削",
    "xiao2": "淆", "xiao3": "小晓筱", "xiao4": "笑效校孝肖啸",
    "yao1": "腰邀妖夭吆",
    "yao2": "摇遥姚瑶谣窑肴尧徭",
    "yao3": "咬杳窈舀", "yao4": "要药耀钥曜鹞",
    # youqiu: ou / iou
    "dou1": "都兜", "dou3": "斗抖陡蚪", "dou4": "豆斗逗痘窦",
    "tou1": "偷", "tou2": "头投骰", "tou4": "透",
    "lou1": "搂", "lou2": "楼娄喽髅蝼", "lou3": "搂篓", "lou4": "漏陋镂露",
    "gou1": "钩沟勾篝", "gou3": "狗苟枸", "gou4": "够构购媾诟垢",
    "kou1": "抠", "kou3": "口", "kou4": "扣寇蔻叩",
    "hou2": "侯喉猴", "hou3": "吼", "hou4": "后厚候",
    "zhou1": "舟洲州周粥诌", "zhou2": "轴", "zhou3": "肘帚", "zhou4": "皱宙昼骤咒纣绉",
    "chou1": "抽", "chou2": "愁绸稠筹酬仇惆畴踌俦", "chou3": "丑瞅", "chou4": "臭",
    "shou1": "收", "shou2": "熟", "shou3": "手首守", "shou4": "受授售瘦寿兽狩绶",
    "rou2": "柔揉蹂糅", "rou4": "肉",
    "zou1": "邹", "zou3": "走", "zou4": "奏揍",
    "cou4": "凑",
    "sou1": "搜艘嗖馊飕", "sou3": "叟", "sou4": "嗽",
    "ou1": "欧鸥殴瓯讴", "ou3": "偶藕呕", "ou4": "沤怄",
    "diu1": "丢",
    "niu1": "妞", "niu2": "牛", "niu3": "扭纽钮忸", "niu4": "拗",
    "liu1": "溜熘", "liu2": "流留刘榴瘤琉硫馏浏骝旒", "liu3": "柳绺", "liu4": "六遛",
    "jiu1": "究纠揪鸠赳啾", "jiu3": "九酒久韭玖灸", "jiu4": "旧就救舅臼咎疚厩柩鹫",
    "qiu1": "秋丘邱蚯鳅楸", "qiu2": "求球囚酋裘遒虬泅",
    "xiu1": "休修羞馐咻", "xiu3": "朽宿", "xiu4": "绣秀袖锈嗅岫宿",
    "you1": "幽悠优忧攸呦",
    "you2": "由游油邮尤犹柚鱿疣蝣蚰铀",
    "you3": "有友酉莠牖黝",
    "you4": "又右幼诱柚釉鼬佑侑囿宥",
    # yanqian: an / ian / uan / üan
    "ban1": "班般搬斑颁扳瘢", "ban3": "板版阪", "ban4": "办半伴拌扮绊瓣",
    "pan1": "潘攀", "pan2": "盘磐蹒蟠", "pan4": "判盼叛畔襻",
    "man2": "蛮瞒馒谩鳗埋", "man3": "满螨", "man4": "慢漫谩曼蔓幔缦",
    "fan1": "帆翻番幡藩", "fan2": "凡烦繁樊矾蕃", "fan3": "反返", "fan4": "饭犯泛范贩梵",
    "dan1": "单担丹耽眈殚箪郸", "dan3": "胆掸疸", "dan4": "淡但蛋弹旦氮诞啖澹",
    "tan1": "滩贪摊瘫坍", "tan2": "谈弹坛昙潭谭痰檀", "tan3": "坦毯袒忐", "tan4": "叹探炭碳",
    "nan2": "南男难", "nan3": "赧腩", "nan4": "难",
    "lan2": "阑兰蓝篮拦栏澜褴斓岚婪", "lan3": "览懒揽缆榄", "lan4": "烂滥",
    "gan1": "干甘肝杆竿柑尴泔", "gan3": "感敢赶杆秆橄擀", "gan4": "干赣",
    "kan1": "看刊堪勘龛", "kan3": "坎砍侃", "kan4": "看瞰",
    "han1": "憨酣鼾", "han2": "寒含韩函涵邯", "han3": "喊罕", "han4": "汉汗旱憾撼翰瀚捍悍焊颔",
    "zhan1": "粘沾瞻毡占詹", "zhan3": "盏展斩崭辗", "zhan4": "蘸站战占栈绽湛颤",
    "chan1": "搀掺", "chan2": "蝉缠禅馋蟾婵潺孱谗", "chan3": "产铲阐谄", "chan4": "颤忏",
    "shan1": "山衫删珊煽扇杉姗潸膻跚", "shan3": "闪陕",
    "shan4": "善扇擅膳汕讪赡鳝缮嬗禅单",
    "ran2": "然燃髯", "ran3": "染冉苒",
    "zan1": "簪", "zan2": "咱", "zan3": "攒昝", "zan4": "赞暂錾瓒",
    "can1": "参餐骖", "can2": "残蚕惭", "can3": "惨", "can4": "灿粲璨",
    "san1": "三叁", "san3": "伞散馓", "san4": "散",
    "an1": "安鞍氨庵桉谙鹌", "an3": "俺", "an4": "暗岸案按黯",
    "bian1": "边编鞭蝙砭", "bian3": "扁贬匾", "bian4": "变便遍辨辩辫卞汴",
    "pian1": "偏篇翩扁", "pian2": "便骈", "pian4": "片骗",
    "mian2": "棉眠绵", "mian3": "免勉缅腼冕娩", "mian4": "面",
    "dian1": "颠掂滇巅癫", "dian3": "点典碘踮", "dian4": "电店殿淀垫奠惦佃甸钿靛",
    "tian1": "天添", "tian2": "田甜填恬", "tian3": "舔",
    "nian1": "拈蔫", "nian2": "年粘鲇黏", "nian3": "碾捻撵辇", "nian4": "念廿",
    "lian2": "帘怜连莲廉联镰涟鲢濂", "lian3": "脸敛", "lian4": "练炼恋链殓",
    "jian1": "间肩尖坚兼监煎笺缄歼菅犍奸",
    "jian3": "拣简减剪检捡茧俭碱睑",
    "jian4": "见件建剑健间渐箭键舰荐贱溅鉴践涧谏毽腱",
    "qian1": "千签牵迁铅谦钎骞悭芊阡",
    "qian2": "前钱潜乾虔黔钳掮",
    "qian3": "浅遣谴缱", "qian4": "欠歉嵌纤倩堑茜芡",
    "xian1": "先仙鲜掀纤锨祆",
    "xian2": "闲嫌贤弦咸衔涎舷娴痫",
    "xian3": "显险鲜藓冼铣",
    "xian4": "现限线县献见宪陷馅羡腺霰苋",
    "yan1": "烟燕淹阉腌胭嫣焉咽殷湮崦",
    "yan2": "言严岩沿炎研盐颜阎延筵檐蜒妍芫闫",
    "yan3": "眼演掩衍奄俨偃魇鼹琰兖",
    "yan4": "燕雁艳宴验焰砚咽唁谚堰彦焱滟酽餍赝",
    "duan1": "端", "duan3": "短", "duan4": "断段锻缎煅椴",
    "tuan1": "湍", "tuan2": "团抟",
    "nuan3": "暖",
    "luan2": "峦孪挛栾鸾銮", "luan3": "卵", "luan4": "乱",
    "guan1": "关观官冠棺纶鳏", "guan3": "管馆莞", "guan4": "惯冠灌罐贯盥掼鹳",
    "kuan1": "宽髋", "kuan3": "款",
    "huan1": "欢獾", "huan2": "还环桓寰鬟洹", "huan3": "缓", "huan4": "换唤患幻焕宦涣痪豢奂",
    "zhuan1": "专砖颛", "zhuan3": "转", "zhuan4": "转传赚撰篆馔",
    "chuan1": "川穿", "chuan2": "船传椽", "chuan3": "喘舛", "chuan4": "串钏",
    "shuan1": "拴栓闩", "shuan4": "涮",
    "ruan3": "软阮",
    "zuan1": "钻", "zuan4": "钻攥",
    "cuan1": "蹿撺", "cuan2": "攒", "cuan4": "窜篡",
    "suan1": "酸", "suan4": "算蒜",
    "wan1": "弯湾豌蜿剜", "wan2": "完玩丸顽烷纨",
    "wan3": "晚碗挽婉惋宛皖莞绾脘", "wan4": "万腕蔓",
    "juan1": "捐娟鹃涓镌蠲", "juan3": "卷", "juan4": "卷倦眷绢隽狷圈",
    "quan1": "圈", "quan2": "全泉权拳痊诠铨蜷颧荃醛鬈", "quan3": "犬畎绻", "quan4": "劝券",
    "xuan1": "宣喧轩萱暄煊揎谖", "xuan2": "旋悬玄漩璇", "xuan3": "选癣",
    "xuan4": "绚眩炫渲旋楦铉",
    "yuan1": "冤鸳渊鸢箢",
    "yuan2": "元原园圆员缘源援猿垣袁辕沅塬橼爰鼋",
    "yuan3": "远", "yuan4": "愿院怨苑媛掾垸瑗",
    # renchen: en / in / uen / ün
    "ben1": "奔贲锛", "ben3": "本苯畚", "ben4": "笨奔",
    "pen1": "喷", "pen2": "盆湓",
    "men1": "闷", "men2": "门们扪钔", "men4": "闷懑焖",
    "fen1": "分纷芬吩氛酚玢", "fen2": "坟焚汾棼", "fen3": "粉", "fen4": "份奋愤粪忿",
    "gen1": "根跟", "gen4": "亘艮",
    "ken3": "肯恳啃垦",
    "hen2": "痕", "hen3": "很狠", "hen4": "恨",
    "zhen1": "真针珍贞侦斟甄箴臻砧祯榛蓁",
    "zhen3": "枕诊疹缜畛", "zhen4": "阵镇振震赈朕鸩圳",
    "chen1": "嗔抻琛郴", "chen2": "尘沉陈晨辰臣忱谌宸", "chen3": "碜", "chen4": "趁衬称榇谶",
    "shen1": "身深申伸绅呻莘娠砷参诜", "shen2": "神什",
    "shen3": "审婶沈谂哂", "shen4": "甚肾渗慎蜃葚",
    "ren2": "人任仁壬", "ren3": "忍荏稔", "ren4": "任认刃韧纫妊饪轫衽仞",
    "zen3": "怎", "zen4": "谮",
    "cen1": "参", "cen2": "岑涔",
    "sen1": "森",
    "en1": "恩", "en4": "摁",
    "bin1": "宾滨彬斌缤濒槟傧玢豳镔", "bin4": "鬓殡摈膑",
    "pin1": "拼姘", "pin2": "频贫嫔颦", "pin3": "品榀", "pin4": "聘牝",
    "min2": "民岷珉缗", "min3": "敏悯闽泯闵皿抿愍",
    "nin2": "您",
    "lin2": "林临邻琳磷鳞淋霖麟遴粼嶙辚瞵", "lin3": "凛廪懔檩", "lin4": "吝赁淋躏蔺",
    "jin1": "金今斤巾筋津襟矜禁衿",
    "jin3": "尽紧仅谨锦瑾馑卺廑槿",
    "jin4": "进近尽晋禁浸烬觐妗缙荩赆噤",
    "qin1": "亲侵钦衾嵚", "qin2": "勤琴秦禽擒芹覃噙螓", "qin3": "寝", "qin4": "沁揿",
    "xin1": "心新辛欣薪馨鑫芯锌忻昕歆", "xin4": "信芯衅囟",
    "yin1": "因阴音姻殷茵荫喑洇氤铟堙",
    "yin2": "银吟寅淫龈霪垠狺鄞夤",
    "yin3": "饮引隐瘾尹蚓吲", "yin4": "印饮荫胤窨",
    "dun1": "吨蹲敦墩礅镦", "dun3": "盹趸", "dun4": "顿盾钝炖遁沌囤砘",
    "tun1": "吞暾", "tun2": "屯豚臀囤饨",
    "lun1": "抡", "lun2": "轮伦论纶沦仑囵", "lun4": "论",
    "gun3": "滚衮绲鲧", "gun4": "棍",
    "kun1": "昆坤鲲琨锟髡", "kun3": "捆阃", "kun4": "困",
    "hun1": "昏婚荤阍", "hun2": "魂浑馄混珲", "hun4": "混诨溷",
    "zhun1": "谆肫", "zhun3": "准",
    "chun1": "春椿蝽", "chun2": "纯唇淳醇莼鹑", "chun3": "蠢",
    "shun3": "吮", "shun4": "顺瞬舜",
    "run4": "润闰",
    "zun1": "尊遵樽鳟", "zun3": "撙",
    "cun1": "村皴", "cun2": "存", "cun3": "忖", "cun4": "寸",
    "sun1": "孙狲荪飧", "sun3": "损笋榫隼",
    "wen1": "温瘟", "wen2": "文闻纹蚊雯阌", "wen3": "稳吻紊刎", "wen4": "问汶璺",
    "jun1": "军君均钧菌皲麇龟", "jun4": "俊峻竣骏郡菌浚隽捃",
    "qun1": "逡", "qun2": "群裙",
    "xun1": "熏勋薰醺獯曛埙窨",
    "xun2": "寻询旬巡循荀洵驯浔恂峋鲟荨",
    "xun4": "训迅讯逊殉徇汛巽蕈",
    "yun1": "晕氲", "yun2": "云匀芸耘纭筠郧沄", "yun3": "允陨殒狁",
    "yun4": "运韵孕蕴酝晕愠韫郓恽熨",
    # jiangyang: ang / iang / uang
    "bang1": "帮邦梆浜", "bang3": "绑榜膀", "bang4": "棒磅傍镑谤蚌蒡",
    "pang1": "乓滂", "pang2": "旁庞螃彷磅逄", "pang4": "胖",
    "mang2": "忙盲茫芒氓硭邙", "mang3": "莽蟒漭",
    "fang1": "芳方坊肪钫邡", "fang2": "房防妨鲂坊", "fang3": "仿访纺舫彷昉", "fang4": "放",
    "dang1": "当裆铛", "dang3": "党挡谠", "dang4": "当荡档宕砀菪",
    "tang1": "汤铴镗蹚", "tang2": "唐堂糖塘膛棠螳搪溏瑭樘", "tang3": "躺倘淌惝傥帑", "tang4": "烫趟",
    "nang1": "囔", "nang2": "囊馕", "nang3": "曩攮",
    "lang1": "啷", "lang2": "郎狼廊琅榔螂锒稂", "lang3": "朗", "lang4": "浪阆",
    "gang1": "刚钢缸纲冈肛罡扛", "gang3": "岗港", "gang4": "杠钢",
    "kang1": "康慷糠", "kang2": "扛", "kang4": "抗炕亢伉",
    "hang1": "夯", "hang2": "航行杭吭颃绗珩", "hang4": "沆",
    "zhang1": "张章彰樟璋漳蟑獐",
    "zhang3": "长涨掌", "zhang4": "嶂帐账胀障丈仗杖瘴幛涨",
    "chang1": "昌猖娼菖阊鲳",
    "chang2": "长常尝肠偿裳徜嫦苌场",
    "chang3": "场厂敞氅昶", "chang4": "唱畅倡怅鬯",
    "shang1": "伤商墒熵觞殇", "shang3": "赏晌垧上", "shang4": "上尚绱",
    "rang2": "瓤穰禳", "rang3": "嚷壤攘", "rang4": "让",
    "zang1": "脏赃臧", "zang4": "葬藏脏奘",
    "cang1": "仓苍舱沧伧", "cang2": "藏",
    "sang1": "桑丧", "sang3": "嗓搡磉颡", "sang4": "丧",
    "ang1": "肮", "ang2": "昂", "ang4": "盎",
    "jiang1": "江将姜僵疆缰浆豇茳礓", "jiang3": "讲奖桨蒋耩",
    "jiang4": "将降酱匠强犟糨",
    "qiang1": "羌枪腔呛戗锖蜣玱", "qiang2": "强墙蔷樯嫱",
    "qiang3": "抢强襁羟镪", "qiang4": "呛炝戗跄",
    "xiang1": "香相乡箱厢湘镶襄骧芗缃葙",
    "xiang2": "详祥翔降庠", "xiang3": "响想享饷鲞飨",
    "xiang4": "向相象像项巷橡蟓",
    "yang1": "央秧殃鸯泱鞅",
    "yang2": "阳杨扬羊洋炀佯疡烊徉垟旸",
    "yang3": "养氧仰痒", "yang4": "样漾恙烊怏",
    "zhuang1": "庄装桩妆", "zhuang4": "壮状撞幢",
    "chuang1": "窗疮创", "chuang2": "床幢", "chuang3": "闯", "chuang4": "创怆",
    "shuang1": "霜双孀", "shuang3": "爽",
    "guang1": "光胱咣", "guang3": "广犷", "guang4": "逛桄",
    "kuang1": "筐匡哐诓", "kuang2": "狂诳", "kuang4": "矿况框旷眶圹邝纩贶",
    "huang1": "荒慌肓",
    "huang2": "黄皇煌蝗凰惶璜潢蟥徨遑隍湟簧磺癀",
    "huang3": "谎晃恍幌", "huang4": "晃",
    "wang1": "汪", "wang2": "王亡", "wang3": "往网枉罔惘辋魍", "wang4": "望忘旺妄",
    # zhongdong: eng / ing / ueng / ong / iong
    "beng1": "崩绷嘣", "beng2": "甭", "beng3": "绷", "beng4": "蹦迸泵甏镚",
    "peng1": "烹砰怦抨", "peng2": "蓬鹏朋棚彭膨硼篷澎堋", "peng3": "捧", "peng4": "碰",
    "meng1": "蒙", "meng2": "蒙萌盟朦檬甍瞢艨虻礞",
    "meng3": "猛蒙锰艋蜢懵蠓", "meng4": "梦孟",
    "feng1": "风烽封丰峰蜂枫疯锋酆葑沣砜", "feng2": "逢缝冯", "feng3": "讽唪", "feng4": "凤奉缝俸",
    "deng1": "灯登蹬簦噔", "deng3": "等戥", "deng4": "凳邓瞪澄磴镫嶝",
    "teng2": "疼腾藤誊滕",
    "neng2": "能",
    "leng2": "棱楞塄", "leng3": "冷", "leng4": "愣楞",
    "geng1": "更耕庚羹赓鹒", "geng3": "耿梗哽鲠埂绠", "geng4": "更",
    "keng1": "坑吭铿",
    "heng1": "哼亨", "heng2": "衡横恒蘅桁", "heng4": "横",
    "zheng1": "争征蒸睁筝峥挣狰铮怔正症",
    "zheng3": "整拯", "zheng4": "正证政郑症挣怔帧诤",
    "cheng1": "称撑瞠柽蛏铛",
    "cheng2": "成城呈乘程诚承盛橙澄惩塍裎酲",
    "cheng3": "逞骋", "cheng4": "秤",
    "sheng1": "声生升牲甥笙", "sheng2": "绳渑", "sheng3": "省", "sheng4": "盛胜圣剩乘嵊晟",
    "reng1": "扔", "reng2": "仍",
    "zeng1": "增曾憎缯罾", "zeng4": "赠甑锃",
    "ceng1": "噌", "ceng2": "层曾", "ceng4": "蹭",
    "seng1": "僧",
    "bing1": "冰兵", "bing3": "丙柄饼秉禀炳屏摒", "bing4": "病并",
    "ping1": "乒娉俜", "ping2": "平瓶评凭萍屏苹坪枰鲆",
    "ming2": "明鸣名铭冥茗溟瞑螟暝", "ming3": "酩", "ming4": "命",
    "ding1": "丁叮盯钉仃疔玎", "ding3": "顶鼎酊", "ding4": "定订钉锭碇啶",
    "ting1": "听厅汀烃", "ting2": "亭停庭廷蜓霆婷葶莛", "ting3": "挺艇铤梃",
    "ning2": "宁凝拧柠狞咛聍", "ning3": "拧", "ning4": "泞佞拧宁",
    "ling2": "零灵铃龄陵凌玲菱蛉翎苓聆囹棂绫羚鲮酃", "ling3": "领岭", "ling4": "令另呤",
    "jing1": "惊经京精晶睛鲸荆兢茎旌泾菁粳腈",
    "jing3": "景警井颈憬阱儆璟",
    "jing4": "静径敬竞境镜净劲竟靖婧痉胫靓迳弪",
    "qing1": "清轻青倾卿氢蜻圊鲭", "qing2": "晴情擎氰檠黥",
    "qing3": "请顷苘", "qing4": "庆罄磬亲箐",
    "xing1": "星兴腥猩惺", "xing2": "行形型刑邢陉硎荥",
    "xing3": "省醒擤", "xing4": "兴姓幸性杏悻荇",
    "ying1": "英鹰樱婴莺缨瑛膺罂鹦璎撄嘤",
    "ying2": "迎营赢盈莹萤荧蝇瀛嬴滢潆萦楹茔荥",
    "ying3": "影颖颍瘿郢", "ying4": "应映硬媵",
    "dong1": "东冬咚鸫氡", "dong3": "懂董", "dong4": "动冻洞栋恫胴硐侗",
    "tong1": "通嗵", "tong2": "桐同铜童彤瞳佟酮峒潼砼茼仝曈",
    "tong3": "统桶筒捅", "tong4": "痛恸",
    "nong2": "农浓脓侬哝", "nong4": "弄",
    "long2": "龙聋笼隆胧珑咙窿眬茏栊泷癃", "long3": "拢垄笼陇垅",
    "gong1": "工公功攻宫弓恭躬供龚肱觥蚣", "gong3": "巩汞拱珙", "gong4": "共贡供",
    "kong1": "空", "kong3": "孔恐倥", "kong4": "控空",
    "hong1": "轰烘哄訇", "hong2": "红鸿洪虹宏弘泓闳荭黉", "hong3": "哄", "hong4": "哄讧蕻",
    "zhong1": "中终钟忠衷盅螽", "zhong3": "种肿冢踵", "zhong4": "重众中种仲",
    "chong1": "充冲憧忡舂茺艟", "chong2": "虫重崇", "chong3": "宠", "chong4": "冲铳",
    "rong2": "茸荣容融绒溶蓉熔榕戎嵘肜蝾狨", "rong3": "冗",
    "zong1": "宗综踪棕鬃枞", "zong3": "总", "zong4": "纵粽",
    "cong1": "聪匆葱囱骢枞", "cong2": "从丛淙琮",
    "song1": "松嵩凇菘忪淞", "song3": "耸怂悚", "song4": "送宋颂诵讼",
    "weng1": "翁嗡鹟", "weng3": "蓊", "weng4": "瓮蕹",
    "yong1": "拥庸雍佣臃痈邕镛慵壅鳙饔", "yong2": "颙",
    "yong3": "永勇涌咏泳踊俑恿蛹甬", "yong4": "用佣",
    "jiong1": "扃", "jiong3": "窘炯迥",
    "qiong2": "穷琼穹茕邛蛩筇跫",
    "xiong1": "兄胸凶汹匈芎", "xiong2": "雄熊",
    "er5": "儿",
}


def build_rows():
    tone_rows: set[tuple[str, int]] = set()
    readings: dict[str, set[tuple[str, int]]] = {}
    for syllable, chars in SYLLABLE_CHARS.items():
        bare, tone = syllable[:-1], int(syllable[-1])
        final = syllable_final(bare)
        seen: set[str] = set()
        for ch in chars:
            if ch in seen:
                raise SystemExit(f"duplicate char {ch!r} inside syllable {syllable}")
            seen.add(ch)
            tone_rows.add((ch, tone))
            readings.setdefault(ch, set()).add((final, tone))

    rhyme_rows: set[tuple[str, str, str]] = set()
    for ch, pairs in readings.items():
        citation = {t for _, t in pairs if t in (1, 2, 3, 4)}
        for final, tone in pairs:
            if tone == 5:
                if citation:
                    continue  # neutral-tone duplicate of a citation reading
                section = "ze"
            else:
                section = "ping" if tone in (1, 2) else "ze"
            group = f"{FINAL_TO_RHYME_CLASS[final]}.{section}"
            rhyme_rows.add((ch, group, section))
    return sorted(tone_rows), sorted(rhyme_rows)


def check_corpus_coverage(readings: set[str]) -> list[str]:
    corpus = DATA_DIR / "corpus.jsonl"
    missing: set[str] = set()
    for line in corpus.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        for ch in json.loads(line)["text"]:
            if "一" <= ch <= "鿿" and ch not in readings:
                missing.add(ch)
    return sorted(missing)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check-corpus", action="store_true",
                        help="fail if any fixture corpus character lacks a reading")
    args = parser.parse_args()

    tone_rows, rhyme_rows = build_rows()
    tones_path = DATA_DIR / "tones.tsv"
    rhymes_path = DATA_DIR / "rhymes.tsv"
    with tones_path.open("w", encoding="utf-8") as fh:
        for ch, tone in tone_rows:
            fh.write(f"{ch}\t{tone}\n")
    with rhymes_path.open("w", encoding="utf-8") as fh:
        for ch, group, section in rhyme_rows:
            fh.write(f"{ch}\t{group}\t{section}\n")
    chars = {ch for ch, _ in tone_rows}
    print(f"wrote {len(tone_rows)} tone rows / {len(rhyme_rows)} rhyme rows "
          f"for {len(chars)} characters")

    if args.check_corpus:
        missing = check_corpus_coverage(chars)
        if missing:
            print("corpus characters missing a reading:", "".join(missing))
            sys.exit(1)
        print("fixture corpus fully covered")


if __name__ == "__main__":
    main()
