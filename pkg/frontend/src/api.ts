// Typed client for the persona-feedback HTTP API. The frontend talks to
// the service exclusively through this module.

export interface Pair {
  attribute: string;
  description: string;
}

export type SectionName =
  | "role_task"
  | "background"
  | "style_preferences"
  | "content_preferences";

export const SECTION_NAMES: SectionName[] = [
  "role_task",
  "background",
  "style_preferences",
  "content_preferences",
];

export const SECTION_TITLES: Record<SectionName, string> = {
  role_task: "Role/Task of Persona",
  background: "Persona Background",
  style_preferences: "Style Preferences",
  content_preferences: "Content Preferences",
};

export interface Persona {
  id: string;
  name: string;
  created_at: string;
  updated_at: string;
  sections: Record<SectionName, Pair[]>;
}

export interface SectionGuidance {
  section: SectionName;
  description: string;
  example_pairs: Pair[];
}

export interface DocumentRecord {
  id: string;
  title: string;
  text: string;
  updated_at: string;
}

export interface Selection {
  start: number;
  end: number;
}

export interface FeedbackResult {
  text: string;
  word_count: number;
  over_limit: boolean;
  latency_ms: number;
  condensed: boolean;
}

export interface CardContext {
  start: number;
  end: number;
  selected_text: string;
  stale?: boolean | null;
}

export interface Card {
  id: string;
  persona_name: string;
  persona: unknown;
  context: CardContext;
  feedback: FeedbackResult;
  created_at: string;
  preview: string;
}

export interface SessionEventBody {
  timestamp_ms: number;
  kind: string;
  payload: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = await resp.json();
    return new ApiError(body.code ?? "UNKNOWN", body.message ?? resp.statusText, resp.status);
  } catch {
    return new ApiError("UNKNOWN", resp.statusText, resp.status);
  }
}

export class ApiClient {
  constructor(private baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      throw await parseError(resp);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string; provider: string }> {
    return this.request("GET", "/health");
  }

  createDocument(title: string, text: string): Promise<DocumentRecord> {
    return this.request("POST", "/documents", { title, text });
  }

  getDocument(id: string): Promise<DocumentRecord> {
    return this.request("GET", `/documents/${id}`);
  }

  listDocuments(): Promise<DocumentRecord[]> {
    return this.request("GET", "/documents");
  }

  updateDocument(id: string, text: string, title?: string): Promise<DocumentRecord> {
    return this.request("PUT", `/documents/${id}`, { text, title });
  }

  createPersona(name: string): Promise<Persona> {
    return this.request("POST", "/personas", { name });
  }

  listPersonas(): Promise<Persona[]> {
    return this.request("GET", "/personas");
  }

  renamePersona(id: string, name: string): Promise<Persona> {
    return this.request("PUT", `/personas/${id}`, { name });
  }

  deletePersona(id: string): Promise<void> {
    return this.request("DELETE", `/personas/${id}`);
  }

  addPair(id: string, section: SectionName, pair: Pair): Promise<Persona> {
    return this.request("POST", `/personas/${id}/sections/${section}/pairs`, pair);
  }

  editPair(id: string, section: SectionName, index: number, pair: Pair): Promise<Persona> {
    return this.request("PUT", `/personas/${id}/sections/${section}/pairs/${index}`, pair);
  }

  removePair(id: string, section: SectionName, index: number): Promise<Persona> {
    return this.request("DELETE", `/personas/${id}/sections/${section}/pairs/${index}`);
  }

  guidance(): Promise<SectionGuidance[]> {
    return this.request("GET", "/guidance");
  }

  requestFeedback(
    documentId: string,
    personaId: string,
    selection: Selection,
    condense?: boolean,
  ): Promise<Card> {
    return this.request("POST", "/feedback", {
      document_id: documentId,
      persona_id: personaId,
      selection,
      condense,
    });
  }

  history(documentId: string): Promise<Card[]> {
    return this.request("GET", `/documents/${documentId}/history`);
  }

  deleteCard(documentId: string, cardId: string): Promise<void> {
    return this.request("DELETE", `/documents/${documentId}/history/${cardId}`);
  }

  cardContext(documentId: string, cardId: string): Promise<CardContext> {
    return this.request("GET", `/documents/${documentId}/history/${cardId}/context`);
  }

  postEvents(documentId: string, events: SessionEventBody[]): Promise<void> {
    return this.request("POST", `/documents/${documentId}/events`, { events });
  }
}
