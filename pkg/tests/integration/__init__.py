# Integration tests for AI Branding Chatbot