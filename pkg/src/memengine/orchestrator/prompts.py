"""Prompt catalog: every template the engine sends to a chat provider."""

from __future__ import annotations

import re
from dataclasses import dataclass

TRANSCRIPT_CLIP_CHARS = 2000


class PromptError(KeyError):
    """A template id is unknown or a placeholder has no binding."""


@dataclass(frozen=True)
class PromptTemplate:
    """A system text plus a user template with {placeholder} slots."""

    id: str
    system_text: str
    user_template: str


ANSWER_SYSTEM = (
    "You are a professional Q&A assistant. Your task is to extract concise, "
    "accurate answers from the provided memory context. You should make "
    "reasonable inferences from the context when possible. You must output "
    "valid JSON format."
)

ANSWER_USER = (
    "Based on these memories:\n"
    "\n"
    "{context}\n"
    "\n"
    "Question: {question}\n"
    "\n"
    "Requirements:\n"
    "1. First, think through the reasoning process\n"
    "2. Provide a CONCISE answer (short phrase, ideally under 10 words). "
    "Use exact words and phrases from the context whenever possible rather "
    "than paraphrasing.\n"
    "3. Answer based on the provided context. You may make reasonable "
    "inferences from the information given.\n"
    "4. Try your best to answer. Only respond with 'unknown' if the context "
    "contains absolutely NO relevant information about the topic asked.\n"
    "5. For counting questions, answer with just the number (e.g., '2' not "
    "'twice').\n"
    "6. For yes/no questions, start with 'Yes', 'No', 'Likely yes', or "
    "'Likely no'.\n"
    "7. When listing multiple items, separate them with commas.\n"
    "8. Return your response in JSON format.\n"
    "\n"
    "Output Format:\n"
    '{"reasoning": "Brief explanation", "answer": "Concise answer"}'
)

ENTITY_SYSTEM = (
    "You are an expert knowledge extraction system. Extract entities and "
    "relations from the given text.\n"
    "\n"
    "Output JSON format:\n"
    "{\n"
    '  "entities": [\n'
    '    {"name": "entity name",\n'
    '     "type": "PERSON|OBJECT|LOCATION|EVENT|CONCEPT|TIME|ORGANIZATION",\n'
    '     "attributes": {"key": "value"},\n'
    '     "confidence": 0.0-1.0}\n'
    "  ],\n"
    '  "relations": [\n'
    '    {"subject": "entity name",\n'
    '     "predicate": "relation type",\n'
    '     "object": "entity name",\n'
    '     "confidence": 0.0-1.0}\n'
    "  ]\n"
    "}\n"
    "\n"
    "Guidelines:\n"
    "- Extract all meaningful entities mentioned\n"
    "- Identify relationships between entities\n"
    "- Use standardized entity types\n"
    "- Assign confidence scores based on clarity\n"
    "- For visual descriptions, pay attention to spatial relationships and "
    "object attributes"
)

ENTITY_USER = "Extract entities and relations from this text:\n\n{text}"

QUERY_ANALYSIS_SYSTEM = "You are a query analysis assistant. Output valid JSON only."

QUERY_ANALYSIS_USER = (
    "Analyze this memory retrieval query and extract:\n"
    "1. intent_type: one of [factual, temporal, comparative, exploratory, "
    "verification]\n"
    "2. entities: list of named entities (people, places, things)\n"
    "3. time_references: any temporal expressions (yesterday, last week, "
    "etc.)\n"
    "4. modality_hints: likely content types [visual, audio, text, video]\n"
    "5. reformulated_query: optimized search query\n"
    "\n"
    "Query: {query}\n"
    "\n"
    "Respond in JSON format only, no explanation."
)

IMAGE_CONCISE_USER = (
    "Describe this image in one concise sentence. Focus on key objects, "
    "actions, and context."
)

IMAGE_DETAILED_USER = (
    "Provide a detailed description of this image including:\n"
    "1. Main subjects and their appearance\n"
    "2. Actions or events taking place\n"
    "3. Setting and environment\n"
    "4. Notable objects\n"
    "5. Any text visible"
)

AUDIO_SUMMARY_USER = (
    "Summarize this audio transcript in one concise sentence:\n"
    "\n"
    "{transcript}\n"
    "\n"
    "Summary:"
)

VIDEO_SUMMARY_USER = (
    "Summarize this video content in 1-2 sentences:\n"
    "\n"
    "{frame_descriptions}\n"
    "{audio_transcript}\n"
    "\n"
    "Video summary:"
)

GALLERY_SYSTEM = (
    "You are an AI assistant evaluated on multimodal long-term "
    "conversational memory. For the given question-answering task, your "
    "responses must be concise, yet complete enough to accurately answer "
    "the questions. If multiple pieces of information about the same event "
    "appear in the conversation, always rely on the most recent "
    "information.\n"
    "\n"
    "The question-answering evaluation will contain several multimodal task "
    "types:\n"
    "\n"
    "Factual Retrieval: Retrieve explicit facts mentioned in the "
    "conversation for the answer.\n"
    "Multi-entity Reasoning: Combine the retrieved information to reason "
    "and infer an answer.\n"
    "Temporal Reasoning: Resolve time-dependent questions.\n"
    "Visual-centric Reasoning: Besides textual information, answer "
    "questions using visual images in the conversation.\n"
    "Test-time Learning: Learn new visual knowledge from provided images "
    "within historical dialogue and use it in question-answering.\n"
    "Visual-centric Search: Find the image(s) that match the information "
    "in a given query and return their image ID(s).\n"
    "Conflict Detection: Detect contradictions between the conversation "
    "history and the information provided in the question.\n"
    "Knowledge Resolution: Resolve knowledge conflicts or updates by "
    "prioritizing the most recent information.\n"
    "Answer Refusal: Decline to answer when the information does not exist "
    "in the conversation history.\n"
    "\n"
    "Follow all instructions strictly. Only answer using information "
    "contained within the multimodal conversation. Do not hallucinate. "
    "Always remain consistent and grounded in the dialogue history."
)

GALLERY_AGENT_USER = (
    "Your task is to answer the question about the conversation between "
    "{speaker_a} and {speaker_b} in a concise manner with the help of "
    "memory content. Please only provide the content of the answer, "
    "without including introductory phrases like 'answer:'. For questions "
    "that require answering a date or time, strictly follow the format and "
    "provide a specific date or time whenever possible. Generate answers "
    "primarily concise, yet complete enough to accurately answer the "
    "questions.\n"
    "\n"
    "The current question is as follows:\n"
    "{observation} {format_constraint}"
)

GALLERY_CONSTRAINTS = {
    "AR": (
        "Provide your answer based on the information in the conversation. "
        "Only if the information about the question is not present in the "
        'conversation, reply with: "Not mentioned."'
    ),
    "CD": (
        "Please check whether this information conflicts with the "
        'conversation, and reply strictly with either "Yes." or "No."'
    ),
    "VS": (
        "Return the image_id of the image(s). If there are multiple images, "
        "sort them in ascending order and separate them by commas. Format "
        'example: "D2:IMG_003, D2:IMG_010, D10:IMG_002" (for format '
        "reference only)."
    ),
}

CONCISENESS_BOOST = (
    "CRITICAL RULE - Answer brevity:\n"
    "You are being evaluated by token-level F1 against a short reference "
    "answer. Verbose answers DESTROY your score. Follow these rules WITHOUT "
    "exception:\n"
    "\n"
    "1. Output ONLY the essential answer - no reasoning, no justification, "
    "no restating the question.\n"
    '2. For Yes/No questions -> answer "Yes." or "No." ONLY. Do NOT add '
    "explanations.\n"
    "3. For factual questions -> answer with the bare fact.\n"
    '   ✓ "Maltese"  ✗ "The dog in the image appears to be a '
    'Maltese."\n'
    "4. For list questions -> comma-separated items, nothing else.\n"
    "5. NEVER use bullet points, numbered lists, or multi-line formatting.\n"
    '6. NEVER start with "The answer is", "Based on the conversation", etc.'
)

MEMORY_CONTEXT_USER = (
    "The retrieved memory contents are as follows:\n"
    "\n"
    "{memory_context}"
)

MULTIMODAL_MEMORY_USER = (
    "{textual_context}\n"
    "image:\n"
    "image_id: {image_id}\n"
    "image_content: [base64-encoded image]"
)

CATALOG: dict[str, PromptTemplate] = {
    tpl.id: tpl
    for tpl in (
        PromptTemplate("answer", ANSWER_SYSTEM, ANSWER_USER),
        PromptTemplate("entity_extraction", ENTITY_SYSTEM, ENTITY_USER),
        PromptTemplate("query_analysis", QUERY_ANALYSIS_SYSTEM,
                       QUERY_ANALYSIS_USER),
        PromptTemplate("image_concise", "", IMAGE_CONCISE_USER),
        PromptTemplate("image_detailed", "", IMAGE_DETAILED_USER),
        PromptTemplate("audio_summary", "", AUDIO_SUMMARY_USER),
        PromptTemplate("video_summary", "", VIDEO_SUMMARY_USER),
        PromptTemplate("gallery_agent", GALLERY_SYSTEM, GALLERY_AGENT_USER),
        PromptTemplate("memory_context", "", MEMORY_CONTEXT_USER),
        PromptTemplate("multimodal_memory", "", MULTIMODAL_MEMORY_USER),
    )
}

_PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")


def _substitute(text: str, bindings: dict[str, str]) -> str:
    def repl(match: re.Match[str]) -> str:
        name = match.group(1)
        if name not in bindings:
            raise PromptError(f"no binding for placeholder {{{name}}}")
        return str(bindings[name])

    return _PLACEHOLDER.sub(repl, text)


def render_prompt(template_id: str, bindings: dict[str, str]) -> dict[str, str]:
    """Fill a catalog template, failing on any unresolved placeholder.

    Brace runs that are not bare lowercase identifiers (the JSON examples
    inside the templates) pass through untouched.
    """
    template = CATALOG.get(template_id)
    if template is None:
        raise PromptError(f"unknown template id {template_id!r}")
    return {
        "system": _substitute(template.system_text, bindings),
        "user": _substitute(template.user_template, bindings),
    }
