"""Static language-code tables shared by the classifier and the URL matcher."""

from __future__ import annotations

from typing import Optional

ISO_639_1 = frozenset(
    """
    aa ab ae af ak am an ar as av ay az ba be bg bh bi bm bn bo br bs ca ce ch
    co cr cs cu cv cy da de dv dz ee el en eo es et eu fa ff fi fj fo fr fy ga
    gd gl gn gu gv ha he hi ho hr ht hu hy hz ia id ie ig ii ik io is it iu ja
    jv ka kg ki kj kk kl km kn ko kr ks ku kv kw ky la lb lg li ln lo lt lu lv
    mg mh mi mk ml mn mr ms mt my na nb nd ne ng nl nn no nr nv ny oc oj om or
    os pa pi pl ps pt qu rm rn ro ru rw sa sc sd se sg si sk sl sm sn so sq sr
    ss st su sv sw ta te tg th ti tk tl tn to tr ts tt tw ty ug uk ur uz ve vi
    vo wa wo xh yi yo za zh zu
    """.split()
)

# Deprecated two-letter codes still seen in the wild.
LEGACY_CODES = {"in": "id", "iw": "he", "ji": "yi"}

# Three-letter codes (terminology and bibliographic forms) mapped to their
# two-letter equivalents.
ISO_639_3_TO_1 = {
    "aar": "aa", "abk": "ab", "afr": "af", "aka": "ak", "alb": "sq",
    "amh": "am", "ara": "ar", "arg": "an", "arm": "hy", "asm": "as",
    "ava": "av", "ave": "ae", "aym": "ay", "aze": "az", "bak": "ba",
    "bam": "bm", "baq": "eu", "bel": "be", "ben": "bn", "bih": "bh",
    "bis": "bi", "bod": "bo", "bos": "bs", "bre": "br", "bul": "bg",
    "bur": "my", "cat": "ca", "ces": "cs", "cha": "ch", "che": "ce",
    "chi": "zh", "chu": "cu", "chv": "cv", "cor": "kw", "cos": "co",
    "cre": "cr", "cym": "cy", "cze": "cs", "dan": "da", "deu": "de",
    "div": "dv", "dut": "nl", "dzo": "dz", "ell": "el", "eng": "en",
    "epo": "eo", "est": "et", "eus": "eu", "ewe": "ee", "fao": "fo",
    "fas": "fa", "fij": "fj", "fin": "fi", "fra": "fr", "fre": "fr",
    "fry": "fy", "ful": "ff", "geo": "ka", "ger": "de", "gla": "gd",
    "gle": "ga", "glg": "gl", "glv": "gv", "gre": "el", "grn": "gn",
    "guj": "gu", "hat": "ht", "hau": "ha", "heb": "he", "her": "hz",
    "hin": "hi", "hmo": "ho", "hrv": "hr", "hun": "hu", "hye": "hy",
    "ibo": "ig", "ice": "is", "ido": "io", "iii": "ii", "iku": "iu",
    "ile": "ie", "ina": "ia", "ind": "id", "ipk": "ik", "isl": "is",
    "ita": "it", "jav": "jv", "jpn": "ja", "kal": "kl", "kan": "kn",
    "kas": "ks", "kat": "ka", "kau": "kr", "kaz": "kk", "khm": "km",
    "kik": "ki", "kin": "rw", "kir": "ky", "kom": "kv", "kon": "kg",
    "kor": "ko", "kua": "kj", "kur": "ku", "lao": "lo", "lat": "la",
    "lav": "lv", "lim": "li", "lin": "ln", "lit": "lt", "ltz": "lb",
    "lub": "lu", "lug": "lg", "mac": "mk", "mah": "mh", "mal": "ml",
    "mao": "mi", "mar": "mr", "may": "ms", "mkd": "mk", "mlg": "mg",
    "mlt": "mt", "mon": "mn", "mri": "mi", "msa": "ms", "mya": "my",
    "nau": "na", "nav": "nv", "nbl": "nr", "nde": "nd", "ndo": "ng",
    "nep": "ne", "nld": "nl", "nno": "nn", "nob": "nb", "nor": "no",
    "nya": "ny", "oci": "oc", "oji": "oj", "ori": "or", "orm": "om",
    "oss": "os", "pan": "pa", "per": "fa", "pli": "pi", "pol": "pl",
    "por": "pt", "pus": "ps", "que": "qu", "roh": "rm", "ron": "ro",
    "rum": "ro", "run": "rn", "rus": "ru", "sag": "sg", "san": "sa",
    "sin": "si", "slk": "sk", "slo": "sk", "slv": "sl", "sme": "se",
    "smo": "sm", "sna": "sn", "snd": "sd", "som": "so", "sot": "st",
    "spa": "es", "sqi": "sq", "srd": "sc", "srp": "sr", "ssw": "ss",
    "sun": "su", "swa": "sw", "swe": "sv", "tah": "ty", "tam": "ta",
    "tat": "tt", "tel": "te", "tgk": "tg", "tgl": "tl", "tha": "th",
    "tib": "bo", "tir": "ti", "ton": "to", "tsn": "tn", "tso": "ts",
    "tuk": "tk", "tur": "tr", "twi": "tw", "uig": "ug", "ukr": "uk",
    "urd": "ur", "uzb": "uz", "ven": "ve", "vie": "vi", "vol": "vo",
    "wel": "cy", "wln": "wa", "wol": "wo", "xho": "xh", "yid": "yi",
    "yor": "yo", "zha": "za", "zho": "zh", "zul": "zu",
}

# English language names, lowercase, mapped to two-letter codes.
LANGUAGE_NAMES = {
    "abkhazian": "ab", "afar": "aa", "afrikaans": "af", "akan": "ak",
    "albanian": "sq", "amharic": "am", "arabic": "ar", "aragonese": "an",
    "armenian": "hy", "assamese": "as", "avaric": "av", "aymara": "ay",
    "azerbaijani": "az", "bambara": "bm", "bashkir": "ba", "basque": "eu",
    "belarusian": "be", "bengali": "bn", "bislama": "bi", "bosnian": "bs",
    "breton": "br", "bulgarian": "bg", "burmese": "my", "castilian": "es",
    "catalan": "ca", "chamorro": "ch", "chechen": "ce", "chinese": "zh",
    "chuvash": "cv", "cornish": "kw", "corsican": "co", "cree": "cr",
    "croatian": "hr", "czech": "cs", "danish": "da", "divehi": "dv",
    "dutch": "nl", "dzongkha": "dz", "english": "en", "esperanto": "eo",
    "estonian": "et", "ewe": "ee", "faroese": "fo", "farsi": "fa",
    "fijian": "fj", "filipino": "tl", "finnish": "fi", "french": "fr",
    "fulah": "ff", "galician": "gl", "georgian": "ka", "german": "de",
    "greek": "el", "guarani": "gn", "gujarati": "gu", "haitian": "ht",
    "hausa": "ha", "hebrew": "he", "herero": "hz", "hindi": "hi",
    "hungarian": "hu", "icelandic": "is", "igbo": "ig", "indonesian": "id",
    "interlingua": "ia", "inuktitut": "iu", "irish": "ga", "italian": "it",
    "japanese": "ja", "javanese": "jv", "kannada": "kn", "kashmiri": "ks",
    "kazakh": "kk", "khmer": "km", "kikuyu": "ki", "kinyarwanda": "rw",
    "komi": "kv", "kongo": "kg", "korean": "ko", "kurdish": "ku",
    "kyrgyz": "ky", "lao": "lo", "latin": "la", "latvian": "lv",
    "limburgish": "li", "lingala": "ln", "lithuanian": "lt",
    "luxembourgish": "lb", "macedonian": "mk", "malagasy": "mg",
    "malay": "ms", "malayalam": "ml", "maltese": "mt", "mandarin": "zh",
    "manx": "gv", "maori": "mi", "marathi": "mr", "marshallese": "mh",
    "mongolian": "mn", "nauru": "na", "navajo": "nv", "ndonga": "ng",
    "nepali": "ne", "norwegian": "no", "occitan": "oc", "ojibwa": "oj",
    "oriya": "or", "oromo": "om", "ossetian": "os", "pali": "pi",
    "pashto": "ps", "persian": "fa", "polish": "pl", "portuguese": "pt",
    "punjabi": "pa", "quechua": "qu", "romanian": "ro", "romansh": "rm",
    "rundi": "rn", "russian": "ru", "samoan": "sm", "sango": "sg",
    "sanskrit": "sa", "sardinian": "sc", "serbian": "sr", "shona": "sn",
    "sindhi": "sd", "sinhala": "si", "slovak": "sk", "slovenian": "sl",
    "somali": "so", "sotho": "st", "spanish": "es", "sundanese": "su",
    "swahili": "sw", "swati": "ss", "swedish": "sv", "tagalog": "tl",
    "tahitian": "ty", "tajik": "tg", "tamil": "ta", "tatar": "tt",
    "telugu": "te", "thai": "th", "tibetan": "bo", "tigrinya": "ti",
    "tonga": "to", "tsonga": "ts", "tswana": "tn", "turkish": "tr",
    "turkmen": "tk", "twi": "tw", "ukrainian": "uk", "urdu": "ur",
    "uyghur": "ug", "uzbek": "uz", "venda": "ve", "vietnamese": "vi",
    "walloon": "wa", "welsh": "cy", "wolof": "wo", "xhosa": "xh",
    "yiddish": "yi", "yoruba": "yo", "zhuang": "za", "zulu": "zu",
}

# Two-letter codes that double as common English words; as bare path
# segments these need both-side "/" delimiters before they count.
AMBIGUOUS_CODES = frozenset(
    ["am", "an", "as", "be", "he", "id", "in", "is", "it", "la",
     "my", "no", "or", "so", "to"]
)


def infer_code(value: str) -> Optional[str]:
    """Map a bare identifier value to a two-letter code, or None."""
    v = value.lower()
    if v in LEGACY_CODES:
        return LEGACY_CODES[v]
    if len(v) == 2 and v in ISO_639_1:
        return v
    if len(v) == 3 and v in ISO_639_3_TO_1:
        return ISO_639_3_TO_1[v]
    if v in LANGUAGE_NAMES:
        return LANGUAGE_NAMES[v]
    return None


def primary_subtag(code: str) -> str:
    """First subtag of a locale-shaped code, lowercased."""
    return code.lower().replace("_", "-").split("-", 1)[0]


def canonical_code(code: str) -> str:
    """Reduce any tag or identifier value to a comparable two-letter form.

    Locale tags lose their region; three-letter and legacy codes map to
    their two-letter equivalents; anything unknown passes through
    lowercased so distinct unknown tags still compare unequal.
    """
    sub = primary_subtag(code)
    return infer_code(sub) or sub
