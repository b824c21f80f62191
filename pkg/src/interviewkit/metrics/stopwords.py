"""Built-in stop-word lists for the TF-IDF path.

Both lists are deliberately conservative function-word lists and can be
overridden per call. The Japanese list targets particles, auxiliaries, and
formal noun glue; with bigram segmentation only single-character tokens and
isolated short runs match, which is the intended degradation without a
morphological dictionary.
"""
from __future__ import annotations

ENGLISH_STOP_WORDS = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can did do does doing down
    during each few for from further had has have having he her here hers
    herself him himself his how i if in into is it its itself just me more
    most my myself no nor not now of off on once only or other our ours
    ourselves out over own same she should so some such than that the their
    theirs them themselves then there these they this those through to too
    under until up very was we were what when where which while who whom why
    will with you your yours yourself yourselves
    """.split()
)

JAPANESE_STOP_WORDS = frozenset(
    """
    の に は を た が で て と し れ さ も な い か だ ば ず ん う ら き つ せ お ね よ
    ある いる する れる られ なる なっ ない あっ あり おり でき せる です ます ませ
    これ それ あれ この その あの ここ そこ こと もの ため よう まで から など なら
    また より ほか ほど うち とき ところ および 及び または ただし しかし そして
    ながら たち ら です とも では にて へ や
    """.split()
)


def stop_words_for(language: str) -> frozenset[str]:
    if language == "ja":
        return JAPANESE_STOP_WORDS
    if language == "en":
        return ENGLISH_STOP_WORDS
    return frozenset()
