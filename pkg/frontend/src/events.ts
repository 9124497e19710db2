// Session event emission. Events are queued with non-decreasing
// timestamps and flushed to the service in batches; feedback request and
// delete events are appended server-side, so the client only emits focus
// changes, persona lifecycle events, and tab opens.

import type { ApiClient, SessionEventBody } from "./api.js";

export type ClientEventKind =
  | "editor_focus"
  | "sidebar_focus"
  | "persona_created"
  | "persona_edited"
  | "persona_tab_opened";

export class EventQueue {
  private queue: SessionEventBody[] = [];
  private lastTimestamp = 0;
  private lastFocus: "editor_focus" | "sidebar_focus" | null = null;

  constructor(
    private api: ApiClient,
    private documentId: string,
  ) {}

  emit(kind: ClientEventKind, payload: Record<string, unknown> = {}): void {
    if (kind === "editor_focus" || kind === "sidebar_focus") {
      if (this.lastFocus === kind) {
        return; // duplicate focus, nothing changed
      }
      this.lastFocus = kind;
    }
    const ts = Math.max(Date.now(), this.lastTimestamp);
    this.lastTimestamp = ts;
    this.queue.push({ timestamp_ms: ts, kind, payload });
  }

  get pending(): number {
    return this.queue.length;
  }

  async flush(): Promise<void> {
    if (this.queue.length === 0) {
      return;
    }
    const batch = this.queue;
    this.queue = [];
    try {
      await this.api.postEvents(this.documentId, batch);
    } catch (err) {
      // put the batch back so a later flush retries it
      this.queue = batch.concat(this.queue);
      throw err;
    }
  }
}
