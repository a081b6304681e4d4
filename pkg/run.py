"""
Command-line entry point: python run.py <command> ... (or flask --app run <command>)
"""
import os

from dotenv import load_dotenv
from flask.cli import FlaskGroup

from qaff import create_app

# Load environment variables
load_dotenv()


def make_app():
    return create_app(config_name=os.getenv('FLASK_ENV', 'development'))


app = make_app()
cli = FlaskGroup(create_app=lambda: app, add_default_commands=False, load_dotenv=False)

if __name__ == '__main__':
    cli()
