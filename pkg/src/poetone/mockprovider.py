"""Offline provider backends selectable from config via mock:// URLs.

Any provider whose ``base_url`` uses the ``mock://`` scheme is served
in-process instead of over HTTP, which makes every pipeline runnable
offline and deterministically:

* ``mock://corpus``  - answers generation prompts with the canonical
  corpus poem for whichever cipai the prompt names (second stanza only
  for continuation prompts) and judge prompts with deterministic scores.
* ``mock://garbage`` - answers generation prompts with prose that
  contains no poem, exercising extraction-failure paths.
"""

from __future__ import annotations

import hashlib
import json

from .gateway import HttpTransport, MalformedResponseError, ProviderConfig
from .prompts import DEFAULT_MARKERS, split_stanzas
from .registry import Corpus, TemplateSet

MOCK_SCHEME = "mock://"


def _is_judge_prompt(prompt_text: str) -> bool:
    return '"fluency"' in prompt_text and '"poetic_quality"' in prompt_text


class FixturePoemTransport:
    """Deterministic replies built from the loaded registry and corpus."""

    def __init__(self, registry: TemplateSet, corpus: Corpus):
        self._registry = registry
        self._corpus = corpus

    def _judge_reply(self, config: ProviderConfig, prompt_text: str) -> str:
        digest = hashlib.sha256(
            (config.provider_id + prompt_text).encode("utf-8")
        ).digest()
        scores = [2 + digest[i] % 4 for i in range(3)]  # 2..5, stable
        return json.dumps(
            {"fluency": scores[0], "coherence": scores[1], "poetic_quality": scores[2]}
        )

    def _generation_reply(self, prompt_text: str) -> str:
        for template in self._registry:
            if template.display_name in prompt_text:
                exemplars = self._corpus.exemplars(template.cipai_id)
                if not exemplars:
                    break
                poem = exemplars[0]
                text = poem.text
                if "续写" in prompt_text:
                    _, text = split_stanzas(text, poem.stanza_boundary_line_index)
                return f"{DEFAULT_MARKERS[0]}{text}{DEFAULT_MARKERS[1]}"
        raise MalformedResponseError("mock corpus provider: prompt names no known cipai")

    def send(self, config: ProviderConfig, prompt_text: str) -> str:
        kind = config.base_url[len(MOCK_SCHEME):].strip("/")
        if _is_judge_prompt(prompt_text):
            return self._judge_reply(config, prompt_text)
        if kind == "garbage":
            return "I appreciate the request, but here is only plain prose."
        if kind == "corpus":
            return self._generation_reply(prompt_text)
        raise MalformedResponseError(f"unknown mock provider kind {kind!r}")


class RoutingTransport:
    """Send mock:// providers in-process, everything else over HTTP."""

    def __init__(self, registry: TemplateSet, corpus: Corpus, timeout: float = 60.0):
        self._fixture = FixturePoemTransport(registry, corpus)
        self._http = HttpTransport(timeout)

    def send(self, config: ProviderConfig, prompt_text: str) -> str:
        if config.base_url.startswith(MOCK_SCHEME):
            return self._fixture.send(config, prompt_text)
        return self._http.send(config, prompt_text)
